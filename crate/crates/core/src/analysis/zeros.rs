use std::collections::BTreeMap;

use serde::Serialize;

use super::stream_expansion;
use crate::engine::ExpansionTranscript;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::{Integer, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeOccurrences {
    #[serde(with = "crate::numbers::rational_string")]
    pub probe: Rational,
    /// `(n, ord_rho q_n)` for every `n` with `q_n(rho) = 0`.
    pub occurrences: Vec<(usize, usize)>,
}

impl ProbeOccurrences {
    pub fn indices(&self) -> Vec<usize> {
        self.occurrences.iter().map(|(n, _)| *n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroOccurrences {
    pub last_index: usize,
    pub probes: Vec<ProbeOccurrences>,
}

/// Whether the integer polynomial `f` vanishes at `u / v`, by homogeneous
/// Horner evaluation of `v^deg f(u / v)`.
pub fn eval_integer_poly_is_zero(f: &Poly, x: &Rational) -> bool {
    let coeffs = f.coeffs();
    if coeffs.is_empty() {
        return true;
    }
    if *x == 0 {
        return coeffs[0] == 0;
    }
    if coeffs.iter().any(|c| *c.denom() != 1) {
        return f.evaluate(x) == 0;
    }
    let (u, v) = (x.numer(), x.denom());
    let mut acc = coeffs.last().expect("nonempty").numer().clone();
    let mut vpow = Integer::from(1);
    for c in coeffs.iter().rev().skip(1) {
        vpow *= v;
        acc *= u;
        acc += Integer::from(c.numer() * &vpow);
    }
    acc == 0
}

fn multiplicity(q: &Poly, probe: &Rational) -> usize {
    q.root_multiplicity(probe).map_or(0, |(m, _)| m)
}

fn scan(q: &Poly, probes: &[Rational], n: usize, hits: &mut BTreeMap<usize, Vec<(usize, usize)>>) {
    if q.is_zero() {
        return;
    }
    for (i, rho) in probes.iter().enumerate() {
        if eval_integer_poly_is_zero(q, rho) {
            hits.entry(i).or_default().push((n, multiplicity(q, rho)));
        }
    }
}

fn collect(last_index: usize, probes: &[Rational], mut hits: BTreeMap<usize, Vec<(usize, usize)>>) -> ZeroOccurrences {
    ZeroOccurrences {
        last_index,
        probes: probes
            .iter()
            .enumerate()
            .map(|(i, rho)| ProbeOccurrences {
                probe: rho.clone(),
                occurrences: hits.remove(&i).unwrap_or_default(),
            })
            .collect(),
    }
}

/// Indices `n <= N` with `q_n(rho) = 0` for each probe. `q_0 = 0` is skipped.
pub fn zero_occurrences(tr: &ExpansionTranscript, probes: &[Rational]) -> Result<ZeroOccurrences> {
    let mut hits = BTreeMap::new();
    for r in tr.records() {
        let q = r.q_hat.as_ref().ok_or_else(|| {
            Error::MissingData(format!(
                "q_{} was thinned; re-run expand without --thin-window",
                r.n
            ))
        })?;
        scan(q, probes, r.n, &mut hits);
    }
    Ok(collect(tr.last_index().unwrap_or(0), probes, hits))
}

/// As [`zero_occurrences`], expanding `sqrt(D)` on the fly so that only one
/// convergent is held at a time.
pub fn zero_occurrences_streaming(radicand: &Poly, probes: &[Rational], last_index: usize) -> Result<ZeroOccurrences> {
    let mut hits = BTreeMap::new();
    stream_expansion(radicand, last_index, |tr, n| {
        let q = tr.records()[n].q_hat.as_ref().expect("newest record keeps its convergent");
        scan(q, probes, n, &mut hits);
        Ok(true)
    })?;
    Ok(collect(last_index, probes, hits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::expand;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn even_indices_for_t2_plus_1() {
        let tr = expand(&p("t^2 + 1"), 10).unwrap();
        let z = zero_occurrences(&tr, &[Rational::from(0)]).unwrap();
        assert_eq!(z.probes[0].indices(), vec![2, 4, 6, 8, 10]);
        assert!(z.probes[0].occurrences.iter().all(|(_, m)| *m == 1));
        assert_eq!(z, zero_occurrences_streaming(&p("t^2 + 1"), &[Rational::from(0)], 10).unwrap());
    }

    #[test]
    fn membership_matches_direct_evaluation() {
        let d = p("t^6 + t + 1");
        let tr = expand(&d, 25).unwrap();
        let probes: Vec<Rational> = [(0, 1), (1, 1), (-1, 1), (1, 2), (-3, 2)].iter().map(|&q| Rational::from(q)).collect();
        let z = zero_occurrences(&tr, &probes).unwrap();
        for (po, rho) in z.probes.iter().zip(&probes) {
            for raw in tr.raw_steps(25).iter().skip(1) {
                let q = raw.q.as_ref().unwrap();
                let m = po.occurrences.iter().find(|(n, _)| *n == raw.n).map_or(0, |o| o.1);
                assert_eq!(q.evaluate(rho) == 0, m > 0);
                if m > 0 {
                    let lin = Poly::linear_root(rho);
                    assert!(lin.pow(m as u32).divides(q).unwrap());
                    assert!(!lin.pow(m as u32 + 1).divides(q).unwrap());
                }
            }
        }
    }

    #[test]
    fn integer_horner() {
        let f = p("4t^2 - 1");
        assert!(eval_integer_poly_is_zero(&f, &Rational::from((1, 2))));
        assert!(eval_integer_poly_is_zero(&f, &Rational::from((-1, 2))));
        assert!(!eval_integer_poly_is_zero(&f, &Rational::from(1)));
        assert!(!eval_integer_poly_is_zero(&p("t + 1"), &Rational::from(0)));
    }
}
