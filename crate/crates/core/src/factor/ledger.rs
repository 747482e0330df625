use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use super::{factor_over_q, FactorList};
use crate::engine::{sign, ExpansionTranscript};
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorEntry {
    pub factor: Poly,
    pub text: String,
    pub degree: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub n: usize,
    pub r_degree: usize,
    pub factorization: FactorList,
    pub recurring: Vec<FactorEntry>,
    pub new: Vec<FactorEntry>,
    pub new_count: usize,
    /// Total degree of the new factors, without multiplicity.
    pub new_degree: usize,
    /// Largest multiplicity among the new factors.
    pub new_multiplicity: usize,
}

/// Irreducible factors of the norms `R_n` over an index window, split into
/// those recurring at two or more indices and the ones new to a single index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorLedger {
    pub window: (usize, usize),
    pub recurring: Vec<Poly>,
    pub entries: Vec<LedgerEntry>,
}

fn entry(f: &Poly, m: usize) -> FactorEntry {
    FactorEntry {
        factor: f.clone(),
        text: f.to_string(),
        degree: f.degree().unwrap_or(0),
        multiplicity: m,
    }
}

impl FactorLedger {
    /// Rebuilds the classification from per-index factorizations.
    pub fn from_factorizations(window: (usize, usize), lists: Vec<(usize, FactorList)>) -> Self {
        let mut seen: BTreeMap<Vec<String>, (Poly, usize)> = BTreeMap::new();
        for (_, list) in &lists {
            for (f, _) in &list.factors {
                seen.entry(f.to_strings()).or_insert_with(|| (f.clone(), 0)).1 += 1;
            }
        }
        let is_recurring = |f: &Poly| seen.get(&f.to_strings()).is_some_and(|(_, c)| *c >= 2);
        let mut recurring: Vec<Poly> = seen
            .values()
            .filter(|(_, c)| *c >= 2)
            .map(|(f, _)| f.clone())
            .collect();
        recurring.sort_by_key(|f| (f.degree(), f.to_strings()));
        let entries = lists
            .into_iter()
            .map(|(n, list)| {
                let (rec, new): (Vec<_>, Vec<_>) =
                    list.factors.iter().partition(|(f, _)| is_recurring(f));
                let new: Vec<FactorEntry> = new.into_iter().map(|(f, m)| entry(f, *m)).collect();
                LedgerEntry {
                    n,
                    r_degree: list.expand().degree().unwrap_or(0),
                    recurring: rec.into_iter().map(|(f, m)| entry(f, *m)).collect(),
                    new_count: new.len(),
                    new_degree: new.iter().map(|e| e.degree).sum(),
                    new_multiplicity: new.iter().map(|e| e.multiplicity).max().unwrap_or(0),
                    new,
                    factorization: list,
                }
            })
            .collect();
        FactorLedger {
            window,
            recurring,
            entries,
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "recurring factors: {}", self.recurring.len());
        for f in &self.recurring {
            let _ = writeln!(out, "  {f}");
        }
        let _ = writeln!(out, "{:>5}  {:>5}  {:>4}  {:>7}  {:>4}  factorization", "n", "deg R", "new", "new deg", "mult");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:>5}  {:>5}  {:>4}  {:>7}  {:>4}  {}",
                e.n, e.r_degree, e.new_count, e.new_degree, e.new_multiplicity, e.factorization
            );
        }
        out
    }
}

/// Factors every `R_n` with `n` in `window`.
pub fn rn_factor_ledger(tr: &ExpansionTranscript, window: RangeInclusive<usize>) -> Result<FactorLedger> {
    let (lo, hi) = (*window.start(), *window.end());
    if tr.record(hi).is_none() {
        return Err(Error::MissingData(format!(
            "transcript ends before index {hi}; expand with more steps"
        )));
    }
    let scales = tr.scales(hi);
    let lists = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let lead = sign(n) * &scales[n].kappa;
            factor_over_q(&tr.records()[n].surd_den_monic).map(|mut l| {
                l.unit *= lead;
                (n, l)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactorLedger::from_factorizations((lo, hi), lists))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::expand;

    #[test]
    fn pellian_norms_are_units() {
        let tr = expand(&Poly::parse("t^2 + 1").unwrap(), 8).unwrap();
        let ledger = rn_factor_ledger(&tr, 1..=8).unwrap();
        assert!(ledger.entries.iter().all(|e| e.factorization.factors.is_empty()));
        assert!(ledger.recurring.is_empty());
    }

    #[test]
    fn elliptic_norms_are_linear() {
        let tr = expand(&Poly::parse("t^4 + t^2 + t").unwrap(), 20).unwrap();
        let ledger = rn_factor_ledger(&tr, 2..=20).unwrap();
        for e in &ledger.entries {
            assert_eq!(e.r_degree, 1);
            assert_eq!(e.new_count, 1);
            assert_eq!(e.new_degree, 1);
        }
        assert!(ledger.to_table().contains("recurring factors: 0"));
    }

    #[test]
    fn window_past_the_end() {
        let tr = expand(&Poly::parse("t^2 + 1").unwrap(), 3).unwrap();
        assert!(matches!(rn_factor_ledger(&tr, 1..=5), Err(Error::MissingData(_))));
    }
}
