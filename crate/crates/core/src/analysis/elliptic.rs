//! Genus-one identities. With `R_n = c_n (t - z_n)` and
//! `S_n = (-1)^n (a_0 + gamma_n)`:
//!
//! 1. `2 gamma_n = c_n c_{n+1}`
//! 2. `2 gamma_n (z_n + z_{n+1}) = 1`
//! 3. `8 gamma_n z_n z_{n+1} = (2 gamma_n + 1)^2`
//! 4. `2 gamma_n = -2e - 4 sum_{m=0}^{n} (-1)^(n-m) z_m^2`, where `e` is the
//!    constant term of `a_0` and the `m = 0` term is read as `z_0^2 = -e/2`
//!    (`R_0 = 1` has no root). For `t^4 + t^2 + t`, `2e = 1`.
//! 5. `a_n = 2 (-1)^n c_n^{-1} (t + z_n)`
//!
//! Item 4 follows from `S_n = sum_{m <= n} a_m R_m` and item 5.

use serde::Serialize;

use crate::engine::identities::Checker;
use crate::engine::{sign, ExpansionTranscript, IdentityCheck};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticIdentityReport {
    pub last_index: usize,
    /// `c_n = lead(R_n)`, for indices with `deg R_n = 1`.
    #[serde(with = "option_rationals")]
    pub c: Vec<Option<Rational>>,
    /// Root `z_n` of `R_n`.
    #[serde(with = "option_rationals")]
    pub z: Vec<Option<Rational>>,
    /// `gamma_n` when `(-1)^n S_n - a_0` is constant.
    #[serde(with = "option_rationals")]
    pub gamma: Vec<Option<Rational>>,
    /// Indices `n >= 1` where `deg R_n != 1`.
    pub not_applicable: Vec<usize>,
    pub checks: Vec<IdentityCheck>,
}

mod option_rationals {
    use serde::Serializer;

    use crate::Rational;

    pub fn serialize<S: Serializer>(v: &[Option<Rational>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.as_ref().map(|q| q.to_string())))
    }
}

impl EllipticIdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.status == crate::engine::IdentityStatus::Pass)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Extracts `c_n, z_n, gamma_n` and checks the identities for
/// `1 <= n <= N - 1` (items needing index `n + 1`) or `n <= N`.
pub fn elliptic_identities(tr: &ExpansionTranscript) -> Result<EllipticIdentityReport> {
    if tr.half_degree() != 2 {
        return Err(Error::MissingData(format!(
            "the genus-one identities need deg D = 4, got {}",
            2 * tr.half_degree()
        )));
    }
    let last = tr
        .last_index()
        .ok_or_else(|| Error::MissingData("empty transcript; expand with --steps".into()))?;
    let raw = tr.raw_steps(last);
    let a0 = tr.a0();
    let e = a0.coeff(0);
    let mut c = Vec::with_capacity(last + 1);
    let mut z = Vec::with_capacity(last + 1);
    let mut gamma = Vec::with_capacity(last + 1);
    let mut not_applicable = Vec::new();
    for (r, step) in raw.iter().zip(tr.records()) {
        if step.deg_norm() == 1 {
            let cn = r.norm.lead();
            z.push(Some(-r.norm.coeff(0) / &cn));
            c.push(Some(cn));
        } else {
            if r.n >= 1 {
                not_applicable.push(r.n);
            }
            c.push(None);
            z.push(None);
        }
        let g = &step.mixed.scale(&sign(r.n)) - a0;
        gamma.push(g.is_constant().then(|| g.coeff(0)));
    }

    let mut gamma0 = Checker::new("gamma_0", "S_0 = a_0, so gamma_0 = 0");
    gamma0.record(0, gamma[0] == Some(Rational::new()), || format!("gamma_0 = {:?}", gamma[0]));
    let mut form = Checker::new("mixed_form", "(-1)^n S_n - a_0 is constant");
    let mut i1 = Checker::new("i", "2 gamma_n = c_n c_{n+1}");
    let mut i2 = Checker::new("ii", "2 gamma_n (z_n + z_{n+1}) = 1");
    let mut i3 = Checker::new("iii", "8 gamma_n z_n z_{n+1} = (2 gamma_n + 1)^2");
    let mut i4 = Checker::new(
        "iv",
        "2 gamma_n = -2e - 4 sum_{m=0}^{n} (-1)^(n-m) z_m^2, z_0^2 := -e/2, e = a_0(0)",
    );
    let mut i5 = Checker::new("v", "a_n = 2 (-1)^n c_n^{-1} (t + z_n)");

    let two = Rational::from(2);
    // alt = sum_{m=0}^{n} (-1)^(n-m) z_m^2, carried as alt_n = z_n^2 - alt_{n-1}.
    let mut alt = Some(-Rational::from(&e / 2u32));
    for n in 1..=last {
        form.record(n, gamma[n].is_some(), || format!("(-1)^{n} S_{n} - a_0 is not constant"));
        alt = match (&alt, &z[n]) {
            (Some(prev), Some(zn)) => Some(Rational::from(zn * zn) - prev),
            _ => None,
        };
        let (Some(g), Some(cn), Some(zn)) = (&gamma[n], &c[n], &z[n]) else {
            continue;
        };
        let g2 = Rational::from(g * 2u32);
        if let Some(sum) = &alt {
            let rhs = Rational::from(&e * -2i32) - Rational::from(sum * 4u32);
            i4.record(n, g2 == rhs, || format!("2 gamma_{n} = {g2}, right side {rhs}"));
        }
        let expected_a = Poly::from_coeffs(vec![zn.clone(), Rational::from(1)])
            .scale(&(sign(n) * &two / cn));
        i5.record(n, raw[n].a == expected_a, || format!("a_{n} = {}, expected {expected_a}", raw[n].a));
        let (Some(c1), Some(z1)) = (c.get(n + 1).and_then(Option::as_ref), z.get(n + 1).and_then(Option::as_ref)) else {
            continue;
        };
        let cc = Rational::from(cn * c1);
        i1.record(n, g2 == cc, || format!("2 gamma_{n} = {g2}, c_n c_(n+1) = {cc}"));
        let s = Rational::from(zn + z1);
        i2.record(n, Rational::from(&g2 * &s) == 1, || format!("2 gamma_{n} (z_n + z_(n+1)) = {}", Rational::from(&g2 * &s)));
        let lhs = Rational::from(g * 8u32) * zn * z1;
        let rhs = Rational::from(&g2 + 1u32).square();
        i3.record(n, lhs == rhs, || format!("{lhs} != {rhs}"));
    }
    Ok(EllipticIdentityReport {
        last_index: last,
        c,
        z,
        gamma,
        not_applicable,
        checks: [gamma0, form, i1, i2, i3, i4, i5].into_iter().map(Checker::finish).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{expand, IdentityStatus};

    #[test]
    fn curve_example() {
        let tr = expand(&Poly::parse("t^4 + t^2 + t").unwrap(), 20).unwrap();
        let rep = elliptic_identities(&tr).unwrap();
        assert_eq!(rep.c[1], Some(Rational::from(-1)));
        assert_eq!(rep.z[1], Some(Rational::from((1, 4))));
        assert_eq!(rep.gamma[0], Some(Rational::new()));
        assert_eq!(rep.gamma[1], Some(Rational::from((-9, 8))));
        assert!(rep.all_pass(), "{:?}", rep.checks);
        assert_eq!(rep.get("iv").unwrap().checked, 20);
        assert_eq!(rep.get("i").unwrap().checked, 19);
        assert!(rep.not_applicable.is_empty());
    }

    #[test]
    fn wrong_genus() {
        let tr = expand(&Poly::parse("t^2 + 1").unwrap(), 3).unwrap();
        assert!(elliptic_identities(&tr).is_err());
    }

    #[test]
    fn constant_norms_are_not_applicable() {
        let tr = expand(&Poly::parse("t^4 - t^2").unwrap(), 6).unwrap();
        let rep = elliptic_identities(&tr).unwrap();
        assert_eq!(rep.not_applicable, (1..=6).collect::<Vec<_>>());
        for name in ["i", "ii", "iii", "iv", "v"] {
            assert_eq!(rep.get(name).unwrap().status, IdentityStatus::NotApplicable);
        }
    }
}
