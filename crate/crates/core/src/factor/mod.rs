//! Exact factorization over the rationals and the factor ledger of the norms
//! `R_n`.

mod ledger;
mod modp;
mod zassenhaus;

use std::fmt;

use rug::ops::Pow;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{yun, Poly};
use crate::Rational;

pub use ledger::{rn_factor_ledger, FactorEntry, FactorLedger, LedgerEntry};
pub use modp::{factor_mod_p, factor_mod_p_seeded, is_prime, ModPFactorization, PrimeField, DEFAULT_SEED};
pub use zassenhaus::{choose_prime, coefficient_bound};

/// `unit * prod factor^multiplicity`, each factor a primitive integer
/// polynomial with positive leading coefficient, irreducible over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorList {
    #[serde(with = "crate::numbers::rational_string")]
    pub unit: Rational,
    pub factors: Vec<(Poly, usize)>,
}

impl FactorList {
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u32);
        }
        acc
    }

    /// Degrees of the irreducible factors, repeated by multiplicity.
    pub fn degree_pattern(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f.degree().unwrap_or(0), *m))
            .collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Display for FactorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for (g, m) in &self.factors {
            write!(f, " * ({g})")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

fn factor_order(a: &(Poly, usize), b: &(Poly, usize)) -> std::cmp::Ordering {
    let key = |p: &Poly| (p.degree().unwrap_or(0), p.to_strings());
    key(&a.0).cmp(&key(&b.0)).then(a.1.cmp(&b.1))
}

/// Complete factorization of a nonzero rational polynomial into irreducibles.
pub fn factor_over_q(f: &Poly) -> Result<FactorList> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut factors = Vec::new();
    for (i, part) in yun(f).iter().enumerate() {
        if part.is_constant() {
            continue;
        }
        let (_, prim) = part.primitive_part();
        for g in zassenhaus::factor_squarefree(&prim) {
            factors.push((Poly::from_integers(&g), i + 1));
        }
    }
    factors.sort_by(factor_order);
    let mut lead_product = Rational::from(1);
    for (g, m) in &factors {
        lead_product *= g.lead().pow(*m as i32);
    }
    let out = FactorList {
        unit: f.lead() / lead_product,
        factors,
    };
    if out.expand() != *f {
        return Err(Error::Invariant(format!("factorization of {f} does not reconstruct")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn list(f: &Poly) -> Vec<(Poly, usize)> {
        factor_over_q(f).unwrap().factors
    }

    #[test]
    fn examples() {
        assert_eq!(list(&p("t^4 + t^2 + t")), vec![(p("t"), 1), (p("t^3 + t + 1"), 1)]);
        assert_eq!(
            list(&p("t^4 - t^2")),
            vec![(p("t - 1"), 1), (p("t"), 2), (p("t + 1"), 1)]
        );
        assert_eq!(list(&p("t^6 + t + 1")), vec![(p("t^6 + t + 1"), 1)]);
        let c = factor_over_q(&p("-7/3")).unwrap();
        assert!(c.factors.is_empty());
        assert_eq!(c.unit, Rational::from((-7, 3)));
        assert_eq!(factor_over_q(&Poly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn rational_coefficients_and_units() {
        let f = p("-3/4*t^3 + 3/4*t");
        let r = factor_over_q(&f).unwrap();
        assert_eq!(r.unit, Rational::from((-3, 4)));
        assert_eq!(r.factors, vec![(p("t - 1"), 1), (p("t"), 1), (p("t + 1"), 1)]);
        assert_eq!(r.to_string(), "-3/4 * (t - 1) * (t) * (t + 1)");
    }

    #[test]
    fn sextic_irreducibility_certificate() {
        // No proper degree is a subset sum of every mod-p degree pattern.
        let f = p("t^6 + t + 1");
        let pats: Vec<Vec<usize>> = [101u64, 103, 107, 109, 113, 127, 131]
            .iter()
            .map(|&q| factor_mod_p(&f, q).unwrap().degree_pattern())
            .collect();
        let possible = |k: usize| pats.iter().all(|pat| subset_sums(pat).contains(&k));
        assert!((1..6).all(|k| !possible(k)), "{pats:?}");
    }

    fn subset_sums(pat: &[usize]) -> Vec<usize> {
        let mut sums = vec![0usize];
        for &d in pat {
            let more: Vec<usize> = sums.iter().map(|s| s + d).collect();
            sums.extend(more);
        }
        sums.sort_unstable();
        sums.dedup();
        sums
    }

    fn small_divisor_search(f: &Poly) -> bool {
        // Brute force for rational roots and monic-ish quadratic factors with
        // small integer coefficients.
        for a in -6i64..=6 {
            for b in 1i64..=6 {
                for c in -6i64..=6 {
                    let g = Poly::from_ints(&[c, a, b]);
                    if f.degree() > Some(2) && g.divides(f).unwrap() {
                        return true;
                    }
                }
                let lin = Poly::from_ints(&[a, b]);
                if f.degree() > Some(1) && lin.divides(f).unwrap() {
                    return true;
                }
            }
        }
        false
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn products_factor_back(
            a in prop::collection::vec(-4i64..5, 2..4),
            b in prop::collection::vec(-4i64..5, 2..4),
            c in prop::collection::vec(-4i64..5, 2..5),
        ) {
            let (fa, fb, fc) = (Poly::from_ints(&a), Poly::from_ints(&b), Poly::from_ints(&c));
            prop_assume!(!fa.is_constant() && !fb.is_constant() && !fc.is_constant());
            let f = &(&fa * &fb) * &fc;
            let r = factor_over_q(&f).unwrap();
            prop_assert_eq!(r.expand(), f.clone());
            for (g, _) in &r.factors {
                prop_assert!(g.lead() > 0);
                if g.degree().unwrap() <= 4 {
                    prop_assert!(!small_divisor_search(g), "{} has a small divisor", g);
                }
            }
            for w in r.factors.windows(2) {
                prop_assert!(w[0].0 != w[1].0);
            }
            for q in [101u64, 127, 211] {
                if let Ok(m) = factor_mod_p(&f, q) {
                    if m.unit != 0 {
                        let sums = subset_sums(&m.degree_pattern());
                        for (g, _) in &r.factors {
                            prop_assert!(sums.contains(&g.degree().unwrap()));
                        }
                    }
                }
            }
        }
    }
}
