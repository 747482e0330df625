use serde::Serialize;

use crate::engine::ExpansionTranscript;
use crate::error::{Error, Result};
use crate::Rational;

pub const DEFAULT_MIN_CONFIRM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreePeriodReport {
    /// `deg a_n`, `0 <= n <= N`.
    pub degrees: Vec<usize>,
    /// `deg q_n`, `0 <= n <= N + 1` (`q_0 = 0` is listed as degree 0).
    pub denominator_degrees: Vec<usize>,
    pub min_confirm: usize,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
    /// One period read from the preperiod on.
    pub pattern: Vec<usize>,
    /// The rotation of `pattern` that is largest lexicographically.
    pub canonical_pattern: Vec<usize>,
    /// Number of complete periods in the periodic suffix.
    pub confirmations: usize,
}

impl DegreePeriodReport {
    pub fn has_candidate(&self) -> bool {
        self.period.is_some()
    }
}

fn is_periodic_from(seq: &[usize], s: usize, pi: usize) -> bool {
    (s..seq.len().saturating_sub(pi)).all(|n| seq[n + pi] == seq[n])
}

/// Smallest preperiod `s` admitting some period `pi` with at least
/// `min_confirm` complete repeats in `seq[s..]`; for that `s`, the smallest
/// such `pi`.
pub fn find_period(seq: &[usize], min_confirm: usize) -> Option<(usize, usize)> {
    let min_confirm = min_confirm.max(1);
    for s in 0..seq.len() {
        let room = seq.len() - s;
        for pi in 1..=room / min_confirm {
            if is_periodic_from(seq, s, pi) {
                return Some((s, pi));
            }
        }
    }
    None
}

fn canonical_rotation(pattern: &[usize]) -> Vec<usize> {
    (0..pattern.len())
        .map(|k| pattern[k..].iter().chain(&pattern[..k]).copied().collect::<Vec<_>>())
        .max()
        .unwrap_or_default()
}

/// Candidate eventual period of `deg a_n` across the whole transcript.
pub fn detect_degree_period(tr: &ExpansionTranscript, min_confirm: usize) -> DegreePeriodReport {
    let degrees = tr.degrees();
    let mut denominator_degrees: Vec<usize> = tr.records().iter().map(|r| r.deg_q.unwrap_or(0)).collect();
    if !tr.is_empty() {
        denominator_degrees.push(tr.cursor().q_hat.degree().unwrap_or(0));
    }
    let mut out = DegreePeriodReport {
        degrees,
        denominator_degrees,
        min_confirm,
        preperiod: None,
        period: None,
        pattern: Vec::new(),
        canonical_pattern: Vec::new(),
        confirmations: 0,
    };
    if out.degrees.len() < 4 * min_confirm.max(1) {
        return out;
    }
    if let Some((s, pi)) = find_period(&out.degrees, min_confirm) {
        out.preperiod = Some(s);
        out.period = Some(pi);
        out.pattern = out.degrees[s..s + pi].to_vec();
        out.canonical_pattern = canonical_rotation(&out.pattern);
        out.confirmations = (out.degrees.len() - s) / pi;
    }
    out
}

/// `deg q_n = c n + r_n` on the periodic range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegQFit {
    #[serde(with = "crate::numbers::rational_string")]
    pub slope: Rational,
    /// First index of the range on which the formula is exact.
    pub start: usize,
    pub period: usize,
    /// `r_n` for `n = start, ..., start + period - 1`; periodic afterwards.
    #[serde(with = "crate::numbers::rational_strings")]
    pub residues: Vec<Rational>,
    /// Last index checked.
    pub verified_through: usize,
}

impl DegQFit {
    pub fn residue(&self, n: usize) -> Option<&Rational> {
        (n >= self.start).then(|| &self.residues[(n - self.start) % self.period])
    }
}

pub fn fit_degq_formula(report: &DegreePeriodReport) -> Result<DegQFit> {
    let (Some(s), Some(pi)) = (report.preperiod, report.period) else {
        return Err(Error::MissingData(
            "no confirmed period; expand with more steps (--steps)".into(),
        ));
    };
    let slope = Rational::from((report.pattern.iter().sum::<usize>() as i64, pi as i64));
    // deg q_{n+1} = deg q_n + deg a_n holds from n = 1.
    let start = s.max(1);
    let degq = &report.denominator_degrees;
    let r = |n: usize| Rational::from(degq[n] as i64) - Rational::from(&slope * n as i64);
    let residues: Vec<Rational> = (start..start + pi).map(r).collect();
    let fit = DegQFit {
        slope: slope.clone(),
        start,
        period: pi,
        residues,
        verified_through: degq.len() - 1,
    };
    for n in start..degq.len() {
        if Some(&r(n)) != fit.residue(n) {
            return Err(Error::Invariant(format!("deg q_{n} breaks the fitted formula")));
        }
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::expand;
    use crate::poly::Poly;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    const OCTIC: &str = "t^8 - t^7 - 3/4*t^6 + 7/2*t^5 - 21/4*t^4 + 7/2*t^3 - 3/4*t^2 - t + 1";

    #[test]
    fn octic_example() {
        let tr = expand(&p(OCTIC), 40).unwrap();
        let rep = detect_degree_period(&tr, 3);
        assert_eq!(
            &rep.degrees[..23],
            &[4, 1, 1, 2, 1, 1, 1, 1, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 1, 1, 1, 2, 1]
        );
        assert_eq!(rep.period, Some(9));
        assert_eq!(rep.preperiod, Some(1));
        assert_eq!(rep.canonical_pattern, vec![2, 1, 1, 1, 1, 1, 1, 1, 1]);
        let fit = fit_degq_formula(&rep).unwrap();
        assert_eq!(fit.slope, Rational::from((10, 9)));
    }

    #[test]
    fn degree_one_tails() {
        for (d, n) in [("t^4 + t^2 + t", 100), ("t^2 + 1", 20)] {
            let tr = expand(&p(d), n).unwrap();
            let rep = detect_degree_period(&tr, 3);
            assert!(rep.preperiod.unwrap() <= 1);
            assert_eq!(rep.period, Some(1));
            assert_eq!(rep.pattern, vec![1]);
            let fit = fit_degq_formula(&rep).unwrap();
            assert_eq!(fit.slope, Rational::from(1));
            assert_eq!(fit.residues, vec![Rational::from(-1)]);
        }
    }

    #[test]
    fn no_candidate() {
        assert_eq!(find_period(&[4, 1, 2, 3, 5, 6, 7], 3), None);
        assert_eq!(find_period(&[3, 1, 2, 1, 2, 1, 2], 3), Some((1, 2)));
        let tr = expand(&p("t^2 + 1"), 5).unwrap();
        let rep = detect_degree_period(&tr, 3);
        assert!(!rep.has_candidate());
        assert!(matches!(fit_degq_formula(&rep), Err(Error::MissingData(_))));
    }
}
