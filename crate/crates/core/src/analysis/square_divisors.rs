//! The bound `deg a_n <= d/2` for large `n`, and the scan for the exceptional
//! shape `D = r^2 D*` with `D*` Pellian of degree above `3d/2`.

use rayon::prelude::*;
use serde::Serialize;

use super::pell::{pell_check, PellReport, PellVerdict};
use super::period::{detect_degree_period, DegreePeriodReport, DEFAULT_MIN_CONFIRM};
use crate::engine::expand_with;
use crate::engine::ExpandOptions;
use crate::error::Result;
use crate::factor::factor_over_q;
use crate::poly::Poly;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailCheck {
    /// Largest `deg a_n` over the last confirmed period.
    pub max_degree: usize,
    #[serde(with = "crate::numbers::rational_string")]
    pub bound: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareDivisor {
    /// Monic `r` with `r^2 | D`.
    pub r: Poly,
    /// `D / r^2`.
    pub reduced: Poly,
    pub reduced_degree: usize,
    /// `deg D* > 3d/2`.
    pub eligible: bool,
    pub pell: Option<PellReport>,
    /// Engine error for `D*`, e.g. when it is a perfect square.
    pub error: Option<String>,
}

impl SquareDivisor {
    pub fn is_exception(&self) -> bool {
        self.eligible && self.pell.as_ref().is_some_and(|p| p.verdict == PellVerdict::Pellian)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Tail within `d/2` and no exceptional divisor found.
    Bound,
    /// Tail above `d/2`, explained by a Pellian `D*`.
    Exception,
    /// Tail within `d/2` although a Pellian `D*` exists.
    BoundWithPellianFactor,
    /// No confirmed period, or a tail above `d/2` with no Pellian `D*`
    /// found within the bound.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBoundReport {
    pub half_degree: usize,
    pub bound: usize,
    pub period: DegreePeriodReport,
    pub tail: Option<TailCheck>,
    pub divisors: Vec<SquareDivisor>,
    pub branch: Branch,
}

/// All monic `r` with `r^2 | D` (including `r = 1`).
pub fn square_divisors(radicand: &Poly) -> Result<Vec<Poly>> {
    let fl = factor_over_q(radicand)?;
    let mut out = vec![Poly::one()];
    for (f, m) in &fl.factors {
        let f = f.monic();
        let mut next = Vec::new();
        for r in &out {
            let mut acc = r.clone();
            next.push(acc.clone());
            for _ in 0..m / 2 {
                acc = &acc * &f;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out.sort_by_key(|r| (r.degree(), r.to_strings()));
    Ok(out)
}

/// Runs the Pell scan on every `D / r^2` in parallel.
pub fn square_divisor_scan(radicand: &Poly, bound: usize) -> Result<Vec<SquareDivisor>> {
    let d = radicand.degree().unwrap_or(0) / 2;
    let divisors = square_divisors(radicand)?;
    divisors
        .into_par_iter()
        .map(|r| {
            let reduced = radicand.quo(&r.square())?;
            let reduced_degree = reduced.degree().unwrap_or(0);
            let eligible = 2 * reduced_degree > 3 * d;
            let (pell, error) = match pell_check(&reduced, bound) {
                Ok(p) => (Some(p), None),
                Err(e) => (None, Some(e.to_string())),
            };
            Ok(SquareDivisor {
                r,
                reduced,
                reduced_degree,
                eligible,
                pell,
                error,
            })
        })
        .collect()
}

pub fn theorem12_check(radicand: &Poly, bound: usize) -> Result<DegreeBoundReport> {
    let tr = expand_with(radicand, bound, ExpandOptions::thin(2))?;
    let d = tr.half_degree();
    let period = detect_degree_period(&tr, DEFAULT_MIN_CONFIRM);
    let tail = period.period.map(|pi| {
        let n = period.degrees.len();
        let max_degree = period.degrees[n - pi..].iter().copied().max().unwrap_or(0);
        TailCheck {
            max_degree,
            bound: Rational::from((d as i64, 2)),
            pass: 2 * max_degree <= d,
        }
    });
    let divisors = square_divisor_scan(radicand, bound)?;
    let exception = divisors.iter().any(SquareDivisor::is_exception);
    let branch = match (&tail, exception) {
        (Some(t), false) if t.pass => Branch::Bound,
        (Some(t), true) if t.pass => Branch::BoundWithPellianFactor,
        (Some(_), true) => Branch::Exception,
        _ => Branch::Inconclusive,
    };
    Ok(DegreeBoundReport {
        half_degree: d,
        bound,
        period,
        tail,
        divisors,
        branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn divisors_of_square_parts() {
        assert_eq!(square_divisors(&p("t^4 + t^2 + t")).unwrap(), vec![Poly::one()]);
        assert_eq!(square_divisors(&p("t^4 - t^2")).unwrap(), vec![Poly::one(), p("t")]);
        let d = &(&p("t^4") * &p("t^2 + 2*t + 1")) * &p("t^2 + 3");
        let ds = square_divisors(&d).unwrap();
        assert_eq!(ds.len(), 6);
    }

    #[test]
    fn squarefree_examples_stay_in_bound() {
        let rep = theorem12_check(&p("t^4 + t^2 + t"), 30).unwrap();
        assert_eq!(rep.tail.as_ref().unwrap().max_degree, 1);
        assert!(rep.tail.unwrap().pass);
        assert_eq!(rep.branch, Branch::Bound);

        let rep = theorem12_check(&p("t^6 + t + 1"), 40).unwrap();
        assert_eq!(rep.tail.unwrap().max_degree, 1);
        assert_eq!(rep.branch, Branch::Bound);
    }

    #[test]
    fn square_factor_scan() {
        let rep = theorem12_check(&p("t^4 - t^2"), 20).unwrap();
        let by_r: Vec<(Poly, bool, bool)> = rep
            .divisors
            .iter()
            .map(|s| (s.r.clone(), s.eligible, s.pell.as_ref().unwrap().verdict == PellVerdict::Pellian))
            .collect();
        assert_eq!(by_r, vec![(Poly::one(), true, true), (p("t"), false, true)]);
        assert_eq!(rep.branch, Branch::Exception);
    }
}
