use std::collections::BTreeSet;

use serde::Serialize;

use crate::engine::ExpansionTranscript;
use crate::error::{Error, Result};

/// `{ m : H_m != 0 }` beside `{ deg q_n }`, both restricted to `m <= max_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HankelReport {
    pub max_m: usize,
    pub nonzero: Vec<usize>,
    pub denominator_degrees: Vec<usize>,
    pub agree: bool,
}

/// Compares the nonvanishing Hankel determinants of the tail of `sqrt(D)`
/// with the denominator degrees of the transcript. A disagreement is an
/// invariant violation.
pub fn hankel_cross_check(tr: &ExpansionTranscript, max_m: usize) -> Result<HankelReport> {
    let mut degs: BTreeSet<usize> = tr.records().iter().skip(1).filter_map(|r| r.deg_q).collect();
    degs.extend(tr.cursor().q_hat.degree());
    let covered = degs.iter().next_back().copied().unwrap_or(0);
    if covered < max_m {
        return Err(Error::MissingData(format!(
            "denominator degrees reach only {covered}; expand with more --steps to cover m = {max_m}"
        )));
    }
    let mut root = tr.sqrt_series();
    let nonzero: Vec<usize> = (0..=max_m).filter(|&m| root.hankel_determinant(m) != 0).collect();
    let denominator_degrees: Vec<usize> = degs.into_iter().filter(|&k| k <= max_m).collect();
    let agree = nonzero == denominator_degrees;
    let report = HankelReport {
        max_m,
        nonzero,
        denominator_degrees,
        agree,
    };
    if !agree {
        return Err(Error::Invariant(format!(
            "Hankel support {:?} differs from denominator degrees {:?}",
            report.nonzero, report.denominator_degrees
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::expand;
    use crate::poly::Poly;

    #[test]
    fn agrees_on_examples() {
        let tr = expand(&Poly::parse("t^4 + t^2 + t").unwrap(), 12).unwrap();
        let rep = hankel_cross_check(&tr, 10).unwrap();
        assert_eq!(rep.nonzero, (0..=10).collect::<Vec<_>>());

        let tr = expand(&Poly::parse("t^2 + 1").unwrap(), 6).unwrap();
        assert_eq!(hankel_cross_check(&tr, 5).unwrap().nonzero, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn gaps_follow_high_degree_quotients() {
        let tr = expand(&Poly::parse("t^4 + t^2").unwrap(), 6).unwrap();
        let rep = hankel_cross_check(&tr, 8).unwrap();
        assert_eq!(rep.nonzero, vec![0, 2, 4, 6, 8]);
    }

    #[test]
    fn short_transcript() {
        let tr = expand(&Poly::parse("t^2 + 1").unwrap(), 2).unwrap();
        assert!(matches!(hankel_cross_check(&tr, 10), Err(Error::MissingData(_))));
    }
}
