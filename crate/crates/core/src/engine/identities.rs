use serde::Serialize;

use super::{sign, ExpansionTranscript};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::series::{sqrt_series, TailSeries};
use crate::Rational;

/// Order at infinity of `p - q sqrt(D)`: returns `(k, c)` with
/// `p - q sqrt(D) = c t^(-k) (1 + o(1))`.
pub fn ord_at_infinity(p: &Poly, q: &Poly, radicand: &Poly) -> Result<(i64, Rational)> {
    let root = sqrt_series(radicand)?;
    ord_with_root(p, q, &root)
}

/// As [`ord_at_infinity`], reusing an already expanded `sqrt(D)`.
///
/// Since `(p - q sqrt D)(p + q sqrt D)` is a nonzero polynomial for
/// non-square `D`, the order is at most `max(deg p, deg q + d)`, which bounds
/// the scan.
pub fn ord_with_root(p: &Poly, q: &Poly, root: &TailSeries) -> Result<(i64, Rational)> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroVector);
    }
    let bound = p.degree_i64().max(q.degree_i64() + root.lead_exponent());
    let mut err = TailSeries::combination(p, q, root);
    let (e, c) = err
        .leading_term(bound)
        .ok_or_else(|| Error::Invariant("p - q sqrt(D) vanished to the order bound".into()))?;
    Ok((-e, c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IdentityStatus {
    Pass,
    Fail { first_index: usize, detail: String },
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub statement: &'static str,
    #[serde(flatten)]
    pub status: IdentityStatus,
    /// Number of indices at which the identity was evaluated.
    pub checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub last_index: Option<usize>,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    /// No identity failed (not-applicable ones do not count as failures).
    pub fn all_pass(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !matches!(c.status, IdentityStatus::Fail { .. }))
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks
            .iter()
            .filter(|c| matches!(c.status, IdentityStatus::Fail { .. }))
            .collect()
    }
}

pub(crate) struct Checker {
    name: &'static str,
    statement: &'static str,
    checked: usize,
    failure: Option<(usize, String)>,
}

impl Checker {
    pub(crate) fn new(name: &'static str, statement: &'static str) -> Self {
        Checker {
            name,
            statement,
            checked: 0,
            failure: None,
        }
    }

    pub(crate) fn record(&mut self, n: usize, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some((n, detail()));
        }
    }

    pub(crate) fn finish(self) -> IdentityCheck {
        let status = match self.failure {
            Some((first_index, detail)) => IdentityStatus::Fail { first_index, detail },
            None if self.checked == 0 => IdentityStatus::NotApplicable,
            None => IdentityStatus::Pass,
        };
        IdentityCheck {
            name: self.name,
            statement: self.statement,
            status,
            checked: self.checked,
        }
    }
}

fn deg(p: &Poly) -> i64 {
    p.degree_i64()
}

/// Checks every structural identity of the expansion at exact equality.
///
/// Only records are used (not the cursor), and indices whose convergents
/// were thinned away are skipped by the checks that need them.
pub fn verify_identities(tr: &ExpansionTranscript) -> IdentityReport {
    verify_identities_upto(tr, usize::MAX)
}

/// As [`verify_identities`], restricted to records `0..=max_index`.
pub fn verify_identities_upto(tr: &ExpansionTranscript, max_index: usize) -> IdentityReport {
    let take = tr.len().min(max_index.saturating_add(1));
    let recs = &tr.records()[..take];
    let d = tr.half_degree() as i64;
    let radicand = tr.radicand();
    let last = take.checked_sub(1);
    let raw = last.map_or_else(Vec::new, |l| tr.raw_steps(l));
    let a: Vec<&Poly> = raw.iter().map(|r| &r.a).collect();
    let norms: Vec<&Poly> = raw.iter().map(|r| &r.norm).collect();
    let conv = |n: usize| -> Option<(&Poly, &Poly)> {
        let r = raw.get(n)?;
        Some((r.p.as_ref()?, r.q.as_ref()?))
    };

    let mut state = Checker::new("state_divisibility", "Q_n | D - P_n^2");
    let mut det = Checker::new("determinant", "p_n q_{n+1} - p_{n+1} q_n = (-1)^n");
    let mut coprime = Checker::new("coprime", "gcd(p_n, q_n) = 1");
    let mut deg_p = Checker::new("degree_p", "deg p_n = deg q_n + d");
    let mut deg_rec = Checker::new("degree_recurrence", "deg q_{n+1} = deg q_n + deg a_n");
    let mut norm = Checker::new("norm", "p_n^2 - D q_n^2 = R_n = (-1)^n Q_n");
    let mut norm_deg = Checker::new("norm_degree", "deg R_n = d - deg a_n");
    let mut incr = Checker::new("mixed_increment", "S_n - S_{n-1} = a_n R_n");
    let mut mixed_norm = Checker::new("mixed_norm", "S_n^2 - D = R_n R_{n+1}");
    let mut mixed = Checker::new(
        "mixed_from_convergents",
        "p_n p_{n+1} - D q_n q_{n+1} = S_n = (-1)^n P_{n+1}",
    );
    let mut lead = Checker::new("leading_coefficient", "2 c lead(p_n) = lead(R_n)");
    let mut quot = Checker::new("quotient_from_norm", "a_n = polypart(2 (-1)^n sqrt(D) / R_n)");
    let mut order = Checker::new("approximation_order", "ord(p_n - q_n sqrt D) = deg q_n + deg a_n");
    let mut bounds = Checker::new("quotient_degree_bounds", "deg a_0 = d, 1 <= deg a_n <= d");

    let mut root = sqrt_series(radicand).expect("validated radicand");
    let depth = recs
        .iter()
        .filter_map(|r| r.deg_q)
        .max()
        .map_or(0, |q| 2 * q as i64 + 2 * d + 2);
    root.extend_to(depth);
    let two_a0 = tr.a0().scale(&Rational::from(2));

    for (n, r) in recs.iter().enumerate() {
        let next = recs.get(n + 1);
        let surd_den = &raw[n].surd_den;
        let divisible = surd_den.divides(&(radicand - &r.surd_num.square())).unwrap_or(false);
        state.record(n, divisible, || {
            format!("Q_{n} = {surd_den} does not divide D - P_{n}^2")
        });
        if n == 0 {
            bounds.record(n, r.deg_a == tr.half_degree(), || format!("deg a_0 = {}", r.deg_a));
        } else {
            bounds.record(n, r.deg_a >= 1 && r.deg_a as i64 <= d, || {
                format!("deg a_{n} = {}", r.deg_a)
            });
        }
        let rn_stored = &norms[n];
        norm_deg.record(n, deg(rn_stored) == d - r.deg_a as i64, || {
            format!("deg R_{n} = {}, deg a_{n} = {}", deg(rn_stored), r.deg_a)
        });
        if n >= 1 {
            let prev = &recs[n - 1];
            incr.record(n, &r.mixed - &prev.mixed == a[n] * *rn_stored, || {
                format!("S_{n} - S_{} != a_{n} R_{n}", n - 1)
            });
            let q = two_a0.scale(&sign(n)).quo(rn_stored).unwrap_or_else(|_| Poly::zero());
            quot.record(n, q == *a[n], || format!("got {q}, a_{n} = {}", a[n]));
        }
        if let Some(nr) = next {
            mixed_norm.record(n, &r.mixed.square() - radicand == *rn_stored * norms[n + 1], || {
                format!("S_{n}^2 - D != R_{n} R_{}", n + 1)
            });
            let expected_s = nr.surd_num.scale(&sign(n));
            if let (Some((p, q)), Some((p1, q1))) = (conv(n), conv(n + 1)) {
                let s = &(p * p1) - &(&(q * q1) * radicand);
                mixed.record(n, s == r.mixed && s == expected_s, || {
                    format!("S_{n} = {} from convergents, stored {}", s, r.mixed)
                });
                let dt = &(p * q1) - &(p1 * q);
                det.record(n, dt == Poly::constant(sign(n)), || format!("got {dt}"));
                if n >= 1 {
                    deg_rec.record(n, deg(q1) == deg(q) + r.deg_a as i64, || {
                        format!("deg q_{} = {}, deg q_{n} + deg a_{n} = {}", n + 1, deg(q1), deg(q) + r.deg_a as i64)
                    });
                }
            }
        }
        let Some((p, q)) = conv(n) else { continue };
        let rn = &p.square() - &(&q.square() * radicand);
        let q_sign = surd_den.scale(&sign(n));
        norm.record(n, rn == **rn_stored && rn == q_sign, || {
            format!("p_{n}^2 - D q_{n}^2 = {rn}, stored R_{n} = {rn_stored}")
        });
        if n == 0 {
            continue;
        }
        coprime.record(n, p.gcd(q).map(|g| g.is_one()).unwrap_or(false), || {
            format!("gcd(p_{n}, q_{n}) != 1")
        });
        deg_p.record(n, deg(p) == deg(q) + d, || {
            format!("deg p_{n} = {}, deg q_{n} = {}", deg(p), deg(q))
        });
        match ord_with_root(p, q, &root) {
            Ok((k, c)) => {
                order.record(n, k == deg(q) + r.deg_a as i64, || {
                    format!("ord = {k}, deg q_{n} + deg a_{n} = {}", deg(q) + r.deg_a as i64)
                });
                let lhs = Rational::from(2) * c * p.lead();
                lead.record(n, lhs == rn.lead(), || {
                    format!("2 c lead(p_{n}) = {lhs}, lead(R_{n}) = {}", rn.lead())
                });
            }
            Err(e) => {
                order.record(n, false, || e.to_string());
                lead.record(n, false, || e.to_string());
            }
        }
    }

    IdentityReport {
        last_index: last,
        checks: [
            state, det, coprime, deg_p, deg_rec, norm, norm_deg, incr, mixed_norm, mixed, lead,
            quot, order, bounds,
        ]
        .into_iter()
        .map(Checker::finish)
        .collect(),
    }
}
