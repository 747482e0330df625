//! If `q_n(rho) = 0` then `p_n - (q_n / (t - rho)) (t - rho) sqrt(D)` has the
//! same order at infinity as `p_n - q_n sqrt(D)`, which exceeds the degree
//! of `b = q_n / (t - rho)` by at least two. So `b` is, up to a constant, a
//! convergent denominator of `sqrt((t - rho)^2 D)` followed by a partial
//! quotient of degree at least 2.

use serde::Serialize;

use super::zeros::zero_occurrences;
use crate::engine::{expand, ExpansionTranscript};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroEvent {
    /// Index in the expansion of `sqrt(D)` with `q_n(rho) = 0`.
    pub n: usize,
    pub multiplicity: usize,
    /// Index `m` in the twisted expansion with `deg q_m = deg q_n - 1`.
    pub event_index: Option<usize>,
    pub event_degree: Option<usize>,
    /// `q_m` is proportional to `q_n / (t - rho)`.
    pub denominator_matches: bool,
    /// The predicted denominator degree lies beyond the twisted transcript.
    pub beyond_range: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossReference {
    #[serde(with = "crate::numbers::rational_string")]
    pub probe: Rational,
    pub last_index: usize,
    pub zeros: Vec<ZeroEvent>,
    /// `(m, deg a_m)` for `m >= 1` with `deg a_m >= 2` in the twisted expansion.
    pub events: Vec<(usize, usize)>,
    /// Events not produced by any zero within range.
    pub unexplained_events: Vec<usize>,
    /// Every in-range zero maps to an event with a matching denominator.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McMullenReport {
    #[serde(with = "crate::numbers::rational_string")]
    pub probe: Rational,
    /// `(t - rho)^2 D`.
    pub twisted: Poly,
    pub degrees: Vec<usize>,
    /// Largest `deg a_n` for `n >= 1`.
    pub max_degree: usize,
    pub high_degree_events: Vec<usize>,
    pub cross_reference: CrossReference,
}

pub(crate) fn twist(radicand: &Poly, probe: &Rational) -> Poly {
    &Poly::linear_root(probe).square() * radicand
}

fn cross_reference_of(
    base: &ExpansionTranscript,
    twisted: &ExpansionTranscript,
    probe: &Rational,
) -> Result<CrossReference> {
    let occ = zero_occurrences(base, std::slice::from_ref(probe))?;
    let events: Vec<(usize, usize)> = twisted
        .records()
        .iter()
        .filter(|r| r.n >= 1 && r.deg_a >= 2)
        .map(|r| (r.n, r.deg_a))
        .collect();
    let top_degree = twisted.cursor().q_hat.degree().unwrap_or(0);
    let lin = Poly::linear_root(probe);
    let mut zeros = Vec::new();
    for &(n, multiplicity) in &occ.probes[0].occurrences {
        let q = base.records()[n].q_hat.as_ref().expect("checked by zero_occurrences");
        let target = q.degree().unwrap_or(0) - 1;
        let found = twisted
            .records()
            .iter()
            .find(|r| r.n >= 1 && r.deg_q == Some(target));
        let b = q.quo(&lin)?;
        let (_, b_prim) = b.primitive_part();
        let b_prim = Poly::from_integers(&b_prim);
        let ev = match found {
            Some(r) => ZeroEvent {
                n,
                multiplicity,
                event_index: Some(r.n),
                event_degree: Some(r.deg_a),
                denominator_matches: r.q_hat.as_ref() == Some(&b_prim),
                beyond_range: false,
            },
            None => ZeroEvent {
                n,
                multiplicity,
                event_index: None,
                event_degree: None,
                denominator_matches: false,
                beyond_range: target >= top_degree,
            },
        };
        zeros.push(ev);
    }
    let explained: Vec<usize> = zeros.iter().filter_map(|z| z.event_index).collect();
    let unexplained_events = events
        .iter()
        .map(|(m, _)| *m)
        .filter(|m| !explained.contains(m))
        .collect();
    let consistent = zeros
        .iter()
        .all(|z| z.beyond_range || (z.denominator_matches && z.event_degree.is_some_and(|k| k >= 2)));
    Ok(CrossReference {
        probe: probe.clone(),
        last_index: base.last_index().unwrap_or(0),
        zeros,
        events,
        unexplained_events,
        consistent,
    })
}

/// Zeros of `q_n` at `rho` for `sqrt(D)` against the degree jumps of
/// `sqrt((t - rho)^2 D)`, both expanded through record `N`. Unlike
/// [`mcmullen_experiment`] this accepts `D(rho) = 0`.
pub fn mcmullen_cross_reference(radicand: &Poly, probe: &Rational, last_index: usize) -> Result<CrossReference> {
    let base = expand(radicand, last_index)?;
    let twisted = expand(&twist(radicand, probe), last_index)?;
    cross_reference_of(&base, &twisted, probe)
}

pub fn mcmullen_experiment(radicand: &Poly, probe: &Rational, last_index: usize) -> Result<McMullenReport> {
    crate::engine::validate_radicand(radicand)?;
    if radicand.evaluate(probe) == 0 {
        return Err(Error::ProbeIsRoot(probe.to_string()));
    }
    let twisted_poly = twist(radicand, probe);
    let base = expand(radicand, last_index)?;
    let twisted = expand(&twisted_poly, last_index)?;
    let cross_reference = cross_reference_of(&base, &twisted, probe)?;
    let degrees = twisted.degrees();
    Ok(McMullenReport {
        probe: probe.clone(),
        twisted: twisted_poly,
        max_degree: degrees.iter().skip(1).copied().max().unwrap_or(0),
        high_degree_events: cross_reference.events.iter().map(|(m, _)| *m).collect(),
        degrees,
        cross_reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn t2_plus_1_at_zero() {
        let rep = mcmullen_experiment(&p("t^2 + 1"), &Rational::from(0), 12).unwrap();
        assert_eq!(rep.twisted, p("t^4 + t^2"));
        let x = &rep.cross_reference;
        assert!(x.consistent);
        let pairs: Vec<(usize, Option<usize>)> = x.zeros.iter().map(|z| (z.n, z.event_index)).collect();
        assert_eq!(&pairs[..3], &[(2, Some(1)), (4, Some(2)), (6, Some(3))]);
        assert!(x.zeros.iter().all(|z| z.beyond_range || z.denominator_matches));
    }

    #[test]
    fn probe_at_a_root_is_rejected() {
        assert_eq!(
            mcmullen_experiment(&p("t^4 + t^2 + t"), &Rational::from(0), 10),
            Err(Error::ProbeIsRoot("0".into()))
        );
        let x = mcmullen_cross_reference(&p("t^4 + t^2 + t"), &Rational::from(0), 30).unwrap();
        assert!(x.consistent);
    }

    #[test]
    fn elliptic_probe_one() {
        let rep = mcmullen_experiment(&p("t^4 + t^2 + t"), &Rational::from(1), 40).unwrap();
        assert!(rep.cross_reference.consistent);
        assert_eq!(rep.degrees[0], 3);
    }
}
