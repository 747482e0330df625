use serde::Serialize;

use super::stream_expansion;
use crate::engine::ExpansionTranscript;
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "bound")]
pub enum PellVerdict {
    Pellian,
    /// No index `1 <= n <= N` with `deg a_n = d`. Not a proof of anything.
    NoWitnessWithin(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PellReport {
    pub bound: usize,
    pub witness_index: Option<usize>,
    /// `(x, y)` with `x^2 - D y^2 = 1`, leading coefficients positive.
    pub solution: Option<(Poly, Poly)>,
    pub verdict: PellVerdict,
    /// `deg a_n` for the scanned records.
    pub degrees: Vec<usize>,
}

fn lead_positive(p: Poly) -> Poly {
    if p.lead() < 0 {
        -&p
    } else {
        p
    }
}

/// Turns the convergent at a witness index into a solution of the Pell
/// equation and verifies it.
fn solution_from(radicand: &Poly, p: &Poly, q: &Poly) -> Result<(Poly, Poly)> {
    let norm = &p.square() - &(&q.square() * radicand);
    if !norm.is_constant() || norm.is_zero() {
        return Err(Error::Invariant(format!("norm at the witness is {norm}, not a nonzero constant")));
    }
    let c = norm.lead();
    let (x, y) = if c == 1 {
        (p.clone(), q.clone())
    } else {
        let inv = crate::Rational::from(c.recip_ref());
        let x = (&p.square() + &(&q.square() * radicand)).scale(&inv);
        let y = (p * q).scale(&(inv * 2u32));
        (x, y)
    };
    let (x, y) = (lead_positive(x), lead_positive(y));
    if y.is_zero() || &x.square() - &(&y.square() * radicand) != Poly::one() {
        return Err(Error::Invariant(format!("Pell solution ({x}, {y}) does not verify")));
    }
    Ok((x, y))
}

/// Scans `a_1, ..., a_N` for a partial quotient of degree `d`.
pub fn pell_check(radicand: &Poly, bound: usize) -> Result<PellReport> {
    let mut degrees = Vec::new();
    let mut witness = None;
    let mut solution = None;
    let d = crate::engine::validate_radicand(radicand)?;
    stream_expansion(radicand, bound, |tr, n| {
        let r = &tr.records()[n];
        degrees.push(r.deg_a);
        if n >= 1 && r.deg_a == d {
            let (p, q) = tr.convergent(n).expect("newest record keeps its convergent");
            solution = Some(solution_from(radicand, &p, &q)?);
            witness = Some(n);
            return Ok(false);
        }
        Ok(true)
    })?;
    Ok(report(bound, witness, solution, degrees))
}

/// As [`pell_check`] on an existing transcript; `N` is its last index.
pub fn pell_from_transcript(tr: &ExpansionTranscript) -> Result<PellReport> {
    let bound = tr.last_index().unwrap_or(0);
    let d = tr.half_degree();
    let degrees = tr.degrees();
    let witness = degrees.iter().enumerate().skip(1).find(|(_, &k)| k == d).map(|(n, _)| n);
    let solution = match witness {
        Some(n) => {
            let (p, q) = tr.convergent(n).ok_or_else(|| {
                Error::MissingData(format!(
                    "convergent {n} was thinned; re-run expand with --pin {n} or without --thin-window"
                ))
            })?;
            Some(solution_from(tr.radicand(), &p, &q)?)
        }
        None => None,
    };
    let degrees = witness.map_or(degrees.clone(), |n| degrees[..=n].to_vec());
    Ok(report(bound, witness, solution, degrees))
}

fn report(bound: usize, witness: Option<usize>, solution: Option<(Poly, Poly)>, degrees: Vec<usize>) -> PellReport {
    PellReport {
        bound,
        witness_index: witness,
        verdict: if witness.is_some() {
            PellVerdict::Pellian
        } else {
            PellVerdict::NoWitnessWithin(bound)
        },
        solution,
        degrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::expand;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn quadratic_examples() {
        let r = pell_check(&p("t^2 + 1"), 5).unwrap();
        assert_eq!(r.witness_index, Some(1));
        assert_eq!(r.solution, Some((p("2t^2 + 1"), p("2t"))));
        assert_eq!(r.verdict, PellVerdict::Pellian);

        let r = pell_check(&p("t^2 - 1"), 5).unwrap();
        assert_eq!(r.solution, Some((p("t"), Poly::one())));
    }

    #[test]
    fn elliptic_has_no_witness() {
        let r = pell_check(&p("t^4 + t^2 + t"), 30).unwrap();
        assert_eq!(r.verdict, PellVerdict::NoWitnessWithin(30));
        assert!(r.degrees[1..].iter().all(|&k| k == 1));
        assert_eq!(r.degrees.len(), 31);
    }

    #[test]
    fn quartic_pellian() {
        let r = pell_check(&p("t^4 - t^2"), 10).unwrap();
        let (x, y) = r.solution.unwrap();
        assert_eq!(&x.square() - &(&y.square() * &p("t^4 - t^2")), Poly::one());
    }

    #[test]
    fn from_transcript() {
        let tr = expand(&p("t^2 + 1"), 4).unwrap();
        assert_eq!(pell_from_transcript(&tr).unwrap(), pell_check(&p("t^2 + 1"), 4).unwrap());
    }
}
