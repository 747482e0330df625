//! The complete-quotient continued fraction engine for `sqrt(D)`.
//!
//! The `n`-th complete quotient is `alpha_n = (P_n + sqrt(D)) / Q_n` with
//! `Q_n | D - P_n^2`. Partial quotients are extracted without touching the
//! infinite expansion of `sqrt(D)`: `a_n` is the polynomial quotient of
//! `P_n + a_0` by `Q_n`, because `sqrt(D) - a_0 = O(1/t)` cannot change it.
//!
//! Over the rationals the expansion is only periodic up to constants, and
//! those constants dominate the sizes: `kappa_n = lead(Q_n)` has height
//! growing like `n^3` while `w_n = kappa_{n-1} kappa_n` stays near `n^2`.
//! Records therefore hold `Q_hat_n = Q_n / kappa_n`, `a_hat_n = kappa_n a_n`
//! and the step scalar `w_n`. Convergents are stored as primitive integer
//! polynomials together with per-step scalar ratios; the plain values are
//! rebuilt on demand from the scalar chain (see [`Scales`]).
//!
//! Convergents follow `(p_0, q_0) = (1, 0)`, `(p_{-1}, q_{-1}) = (0, 1)` and
//! `p_{n+1} = a_n p_n + p_{n-1}`, so that `p_n / q_n = [a_0, ..., a_{n-1}]`.

pub(crate) mod identities;
mod io;

use std::collections::BTreeSet;

use rug::Integer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::poly::{mul_integer_polys, squarefree_decomposition, Poly};
use crate::series::{rational_sqrt, sqrt_series, TailSeries};
use crate::Rational;

pub use identities::{
    ord_at_infinity, ord_with_root, verify_identities, verify_identities_upto, IdentityCheck,
    IdentityReport, IdentityStatus,
};
pub use io::{read_transcript, write_transcript, TranscriptHeader, FORMAT_VERSION};

/// Human-readable statement of the indexing convention, stored in every
/// transcript header.
pub const CONVENTION: &str = "(p_0,q_0)=(1,0); p_{n+1}=a_n p_n+p_{n-1}; alpha_n=(P_n+sqrt D)/Q_n; \
R_n=p_n^2-D q_n^2; S_n=p_n p_{n+1}-D q_n q_{n+1}; a_n=a_hat/kappa; Q_n=kappa*Q_hat; \
kappa_n=w_n/kappa_{n-1}; ell_{n+1}=ell_{n-1}/beta_n; c_n=c_{n-1}*scale_n; p_n=ell_n*c^p_n*p_hat_n";

/// Checks that `D` has positive even degree, a square leading coefficient,
/// and is not a perfect square. Returns `d = deg D / 2`.
pub fn validate_radicand(radicand: &Poly) -> Result<usize> {
    let deg = radicand.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if deg % 2 == 1 {
        return Err(Error::OddDegree(deg));
    }
    if rational_sqrt(&radicand.lead()).is_none() {
        return Err(Error::NotASquareLead(radicand.lead().to_string()));
    }
    if squarefree_decomposition(radicand).is_perfect_square {
        return Err(Error::PerfectSquare);
    }
    Ok(deg / 2)
}

/// `D(t) = lead * E(t - shift)` with `E` monic and free of `t^(2d-1)`.
///
/// Then `sqrt(D)(t) = s * sqrt(E)(t - shift)` with `s^2 = lead`, so the
/// expansion of `E` carries the same partial-quotient degrees, Pell verdict
/// and period as that of `D`. Nothing applies this implicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub original: Poly,
    pub normalized: Poly,
    #[serde(with = "crate::numbers::rational_string")]
    pub lead: Rational,
    #[serde(with = "crate::numbers::rational_string")]
    pub shift: Rational,
}

impl Normalization {
    pub fn describe(&self) -> String {
        let arg = match self.shift.cmp0() {
            std::cmp::Ordering::Equal => "t".to_string(),
            std::cmp::Ordering::Greater => format!("t - {}", self.shift),
            std::cmp::Ordering::Less => format!("t + {}", Rational::from(-&self.shift)),
        };
        format!("D(t) = {} E({arg}) with D = {}", self.lead, self.original)
    }

    /// Maps a polynomial in the normalized variable back to `t`.
    pub fn pull_back(&self, f: &Poly) -> Poly {
        f.translate(&-self.shift.clone())
    }
}

/// The monic, depressed form of a valid radicand.
pub fn normalize_radicand(radicand: &Poly) -> Result<Normalization> {
    let d = validate_radicand(radicand)?;
    let lead = radicand.lead();
    let h = -(radicand.coeff(2 * d - 1) / Rational::from(2 * d as u64)) / &lead;
    let normalized = radicand.translate(&h).scale(&Rational::from(lead.recip_ref()));
    Ok(Normalization {
        original: radicand.clone(),
        normalized,
        lead,
        shift: h,
    })
}

pub fn sign(n: usize) -> Rational {
    if n.is_multiple_of(2) {
        Rational::from(1)
    } else {
        Rational::from(-1)
    }
}

/// Complete quotient `(P_n + sqrt(D)) / (kappa_n Q_hat_n)` with `Q_hat_n`
/// monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdState {
    radicand: Poly,
    half_degree: usize,
    a0: Poly,
    num: Poly,
    den_monic: Poly,
    kappa: Rational,
    index: usize,
}

/// Output of one step: `a_hat = kappa_n a_n` and `w = kappa_n kappa_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledStep {
    pub a_hat: Poly,
    pub w: Rational,
}

/// One step on `(P_n, Q_hat_n)`; returns `(a_hat_n, P_{n+1}, w_{n+1}, Q_hat_{n+1})`.
fn normalized_step(
    radicand: &Poly,
    a0: &Poly,
    num: &Poly,
    den_monic: &Poly,
    index: usize,
) -> Result<(Poly, Poly, Rational, Poly)> {
    let a_hat = (num + a0).quo(den_monic)?;
    let next_num = &(&a_hat * den_monic) - num;
    let w_poly = (radicand - &next_num.square())
        .div_exact(den_monic)?
        .ok_or_else(|| {
            Error::Invariant(format!("Q_{index} does not divide D - P_{}^2", index + 1))
        })?;
    let w = w_poly
        .lead_ref()
        .cloned()
        .ok_or_else(|| Error::Invariant("complete quotient became infinite".into()))?;
    let next_den = w_poly.scale(&Rational::from(w.recip_ref()));
    Ok((a_hat, next_num, w, next_den))
}

impl SurdState {
    /// Initial state `P_0 = 0`, `Q_0 = 1`.
    pub fn init(radicand: &Poly) -> Result<SurdState> {
        let half_degree = validate_radicand(radicand)?;
        let a0 = sqrt_series(radicand)?.polynomial_part();
        debug_assert_eq!(a0.degree(), Some(half_degree));
        Ok(SurdState {
            radicand: radicand.clone(),
            half_degree,
            a0,
            num: Poly::zero(),
            den_monic: Poly::one(),
            kappa: Rational::from(1),
            index: 0,
        })
    }

    pub fn radicand(&self) -> &Poly {
        &self.radicand
    }

    /// `d = deg D / 2`.
    pub fn half_degree(&self) -> usize {
        self.half_degree
    }

    /// Polynomial part of `sqrt(D)`.
    pub fn a0(&self) -> &Poly {
        &self.a0
    }

    /// `P_n`.
    pub fn num(&self) -> &Poly {
        &self.num
    }

    /// `Q_n`.
    pub fn den(&self) -> Poly {
        self.den_monic.scale(&self.kappa)
    }

    /// `Q_n / lead(Q_n)`.
    pub fn den_monic(&self) -> &Poly {
        &self.den_monic
    }

    /// `lead(Q_n)`.
    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Moves to `alpha_{n+1}`, returning `a_n` in scaled form.
    pub fn advance_scaled(&mut self) -> Result<ScaledStep> {
        let (a_hat, num, w, den) =
            normalized_step(&self.radicand, &self.a0, &self.num, &self.den_monic, self.index)?;
        self.num = num;
        self.den_monic = den;
        self.kappa = Rational::from(&w / &self.kappa);
        self.index += 1;
        Ok(ScaledStep { a_hat, w })
    }

    /// Emits `a_n` and moves to `alpha_{n+1}`.
    pub fn advance(&mut self) -> Result<Poly> {
        let kappa = self.kappa.clone();
        let step = self.advance_scaled()?;
        Ok(step.a_hat.scale(&Rational::from(kappa.recip_ref())))
    }

    /// Functional form of [`SurdState::advance`].
    pub fn step(&self) -> Result<(Poly, SurdState)> {
        let mut next = self.clone();
        let a = next.advance()?;
        Ok((a, next))
    }
}

/// One row of an expansion transcript.
///
/// Everything here has height of order `n^2`. The plain `a_n`, `Q_n`, `R_n`,
/// `p_n` and `q_n` carry scalars of height `n^3` and are obtained through
/// [`ExpansionTranscript::scales`] and the `raw_*` accessors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub n: usize,
    /// `kappa_n a_n`.
    pub a_hat: Poly,
    pub deg_a: usize,
    /// `P_n`.
    #[serde(rename = "P")]
    pub surd_num: Poly,
    /// `Q_n / kappa_n`, monic.
    #[serde(rename = "Q_hat")]
    pub surd_den_monic: Poly,
    /// `w_n = kappa_{n-1} kappa_n`, with `w_0 = 1`.
    #[serde(with = "crate::numbers::rational_string")]
    pub w: Rational,
    /// `beta_n = ell_{n-1} / ell_{n+1}`.
    #[serde(with = "crate::numbers::rational_string")]
    pub beta: Rational,
    /// Primitive integer polynomial proportional to `p_n`; dropped in thin
    /// transcripts.
    pub p_hat: Option<Poly>,
    /// Primitive integer polynomial proportional to `q_n`.
    pub q_hat: Option<Poly>,
    /// `c^p_n / c^p_{n-1}`.
    #[serde(with = "crate::numbers::rational_string")]
    pub p_scale: Rational,
    #[serde(with = "crate::numbers::rational_string")]
    pub q_scale: Rational,
    pub deg_p: Option<usize>,
    pub deg_q: Option<usize>,
    /// SHA-256 of the dropped convergent data, present once thinned.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergent_digest: Option<String>,
    /// `S_n = p_n p_{n+1} - D q_n q_{n+1}`, obtained as `(-1)^n P_{n+1}`.
    #[serde(rename = "S")]
    pub mixed: Poly,
}

impl StepRecord {
    /// `deg R_n = deg Q_n`.
    pub fn deg_norm(&self) -> usize {
        self.surd_den_monic.degree().unwrap_or(0)
    }

    pub fn is_thin(&self) -> bool {
        self.q_hat.is_none()
    }

    fn thin(&mut self) {
        if let (Some(p), Some(q)) = (self.p_hat.take(), self.q_hat.take()) {
            self.convergent_digest = Some(convergent_digest(&p, &q));
        }
    }
}

/// Exact scalars turning a record into plain values:
/// `Q_n = kappa Q_hat_n`, `a_n = a_hat_n / kappa`,
/// `p_n = ell p_content p_hat_n`, `q_n = ell q_content q_hat_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scales {
    pub kappa: Rational,
    pub ell: Rational,
    pub p_content: Rational,
    pub q_content: Rational,
}

impl Scales {
    pub fn p_factor(&self) -> Rational {
        Rational::from(&self.ell * &self.p_content)
    }

    pub fn q_factor(&self) -> Rational {
        Rational::from(&self.ell * &self.q_content)
    }
}

/// Plain values of one record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawStep {
    pub n: usize,
    pub a: Poly,
    /// `Q_n`.
    pub surd_den: Poly,
    /// `R_n = (-1)^n Q_n`.
    pub norm: Poly,
    pub p: Option<Poly>,
    pub q: Option<Poly>,
}

/// Resumption point: everything needed to produce record `next_index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cursor {
    pub next_index: usize,
    #[serde(rename = "P")]
    pub surd_num: Poly,
    #[serde(rename = "Q_hat")]
    pub surd_den_monic: Poly,
    /// `w` of the next record.
    #[serde(with = "crate::numbers::rational_string")]
    pub w: Rational,
    /// `lead(a_hat_{n-1})` (1 at the start and after `n = 0`).
    #[serde(with = "crate::numbers::rational_string")]
    pub lead_prev: Rational,
    pub p_hat: Poly,
    pub q_hat: Poly,
    #[serde(with = "crate::numbers::rational_string")]
    pub p_scale: Rational,
    #[serde(with = "crate::numbers::rational_string")]
    pub q_scale: Rational,
    pub p_hat_prev: Poly,
    pub q_hat_prev: Poly,
}

impl Cursor {
    fn start() -> Cursor {
        Cursor {
            next_index: 0,
            surd_num: Poly::zero(),
            surd_den_monic: Poly::one(),
            w: Rational::from(1),
            lead_prev: Rational::from(1),
            p_hat: Poly::one(),
            q_hat: Poly::zero(),
            p_scale: Rational::from(1),
            q_scale: Rational::from(1),
            p_hat_prev: Poly::zero(),
            q_hat_prev: Poly::one(),
        }
    }
}

fn integer_coeffs(p: &Poly) -> Vec<Integer> {
    p.coeffs()
        .iter()
        .map(|c| {
            debug_assert_eq!(*c.denom(), 1);
            c.numer().clone()
        })
        .collect()
}

/// `m * cur + k * prev` made primitive with positive leading coefficient.
/// Returns the primitive polynomial and the factor `s` with
/// `m * cur + k * prev = s * result`.
fn integer_step(m: &Poly, k: &Rational, cur: &Poly, prev: &Poly) -> (Poly, Rational) {
    let (mi, e1) = m.to_integer_form();
    let mut e = e1.clone();
    e.lcm_mut(k.denom());
    let mut t = mul_integer_polys(&mi, &integer_coeffs(cur));
    if e != e1 {
        let f = Integer::from(&e / &e1);
        for c in &mut t {
            *c *= &f;
        }
    }
    if !prev.is_zero() && *k.numer() != 0 {
        let f = k.numer() * Integer::from(&e / k.denom());
        let prev = integer_coeffs(prev);
        if t.len() < prev.len() {
            t.resize(prev.len(), Integer::new());
        }
        for (c, x) in t.iter_mut().zip(&prev) {
            *c += Integer::from(&f * x);
        }
    }
    while t.last().is_some_and(|c| *c == 0) {
        t.pop();
    }
    let mut g = Integer::new();
    for c in t.iter().rev() {
        g.gcd_mut(c);
        if g == 1 {
            break;
        }
    }
    if t.last().is_some_and(|c| *c < 0) {
        g = -g;
    }
    if g != 1 {
        for c in &mut t {
            c.div_exact_mut(&g);
        }
    }
    (Poly::from_integers(&t), Rational::from((g, e)))
}

/// Retention policy for the (large) convergents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandOptions {
    /// Keep `p_n, q_n` only for the last `w` records; `None` keeps all.
    pub thin_window: Option<usize>,
    /// Indices whose convergents are always kept.
    #[serde(default)]
    pub pinned: BTreeSet<usize>,
}

impl ExpandOptions {
    pub fn full() -> Self {
        ExpandOptions::default()
    }

    pub fn thin(window: usize) -> Self {
        ExpandOptions {
            thin_window: Some(window),
            pinned: BTreeSet::new(),
        }
    }
}

/// The records `0..=N` of an expansion plus its resumption cursor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTranscript {
    radicand: Poly,
    half_degree: usize,
    a0: Poly,
    options: ExpandOptions,
    records: Vec<StepRecord>,
    cursor: Cursor,
    normalization: String,
}

/// Expands `sqrt(D)` through record `N` (inclusive), keeping all convergents.
pub fn expand(radicand: &Poly, last_index: usize) -> Result<ExpansionTranscript> {
    expand_with(radicand, last_index, ExpandOptions::full())
}

pub fn expand_with(
    radicand: &Poly,
    last_index: usize,
    options: ExpandOptions,
) -> Result<ExpansionTranscript> {
    let mut tr = ExpansionTranscript::start(radicand, options)?;
    tr.extend_to(last_index)?;
    Ok(tr)
}

impl ExpansionTranscript {
    /// An empty transcript positioned before record 0.
    pub fn start(radicand: &Poly, options: ExpandOptions) -> Result<ExpansionTranscript> {
        let state = SurdState::init(radicand)?;
        Ok(ExpansionTranscript {
            radicand: radicand.clone(),
            half_degree: state.half_degree,
            a0: state.a0,
            options,
            records: Vec::new(),
            cursor: Cursor::start(),
            normalization: "none".to_string(),
        })
    }

    pub(crate) fn from_parts(
        radicand: Poly,
        half_degree: usize,
        a0: Poly,
        options: ExpandOptions,
        records: Vec<StepRecord>,
        cursor: Cursor,
        normalization: String,
    ) -> ExpansionTranscript {
        ExpansionTranscript {
            radicand,
            half_degree,
            a0,
            options,
            records,
            cursor,
            normalization,
        }
    }

    /// How the radicand was obtained from the user's input; "none" unless
    /// a [`Normalization`] was recorded.
    pub fn normalization(&self) -> &str {
        &self.normalization
    }

    /// Records that this transcript expands `norm.normalized`.
    pub fn set_normalization(&mut self, norm: &Normalization) -> Result<()> {
        if norm.normalized != self.radicand {
            return Err(Error::Invariant("normalization is for a different radicand".into()));
        }
        self.normalization = norm.describe();
        Ok(())
    }

    pub fn radicand(&self) -> &Poly {
        &self.radicand
    }

    pub fn half_degree(&self) -> usize {
        self.half_degree
    }

    pub fn a0(&self) -> &Poly {
        &self.a0
    }

    pub fn options(&self) -> &ExpandOptions {
        &self.options
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    pub fn record(&self, n: usize) -> Option<&StepRecord> {
        self.records.get(n)
    }

    pub fn cursor(&self) -> &Cursor {
        &self.cursor
    }

    /// Index of the last record, or `None` when empty.
    pub fn last_index(&self) -> Option<usize> {
        self.records.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `deg a_n` for every record.
    pub fn degrees(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.deg_a).collect()
    }

    /// Scalar chain for indices `0..=upto`, where `upto` may be `N + 1`
    /// (served from the cursor). Costs one pass over the records.
    pub fn scales(&self, upto: usize) -> Vec<Scales> {
        let upto = upto.min(self.records.len());
        let one = Rational::from(1);
        let mut out: Vec<Scales> = Vec::with_capacity(upto + 1);
        let mut kappa_prev = one.clone();
        let (mut pc, mut qc) = (one.clone(), one.clone());
        for n in 0..=upto {
            let (w, ps, qs) = match self.records.get(n) {
                Some(r) => (&r.w, &r.p_scale, &r.q_scale),
                None => (&self.cursor.w, &self.cursor.p_scale, &self.cursor.q_scale),
            };
            let kappa = Rational::from(w / &kappa_prev);
            // ell_n = ell_{n-2} / beta_{n-1}
            let ell = if n == 0 {
                one.clone()
            } else {
                let before = if n >= 2 { out[n - 2].ell.clone() } else { one.clone() };
                before / &self.records[n - 1].beta
            };
            pc *= ps;
            qc *= qs;
            kappa_prev = kappa.clone();
            out.push(Scales {
                kappa,
                ell,
                p_content: pc.clone(),
                q_content: qc.clone(),
            });
        }
        out
    }

    /// `kappa_n = lead(Q_n)`.
    pub fn kappa(&self, n: usize) -> Option<Rational> {
        (n <= self.records.len()).then(|| self.scales(n).pop().expect("nonempty").kappa)
    }

    /// Partial quotient `a_n`.
    pub fn partial_quotient(&self, n: usize) -> Option<Poly> {
        let r = self.records.get(n)?;
        let kappa = self.kappa(n)?;
        Some(r.a_hat.scale(&Rational::from(kappa.recip_ref())))
    }

    /// `R_n = p_n^2 - D q_n^2 = (-1)^n Q_n`.
    pub fn norm(&self, n: usize) -> Option<Poly> {
        let r = self.records.get(n)?;
        Some(r.surd_den_monic.scale(&(sign(n) * self.kappa(n)?)))
    }

    /// Plain values of records `0..=upto` (clamped to the transcript).
    pub fn raw_steps(&self, upto: usize) -> Vec<RawStep> {
        let Some(last) = self.last_index() else {
            return Vec::new();
        };
        let upto = upto.min(last);
        self.scales(upto)
            .into_iter()
            .zip(&self.records)
            .map(|(s, r)| {
                let surd_den = r.surd_den_monic.scale(&s.kappa);
                RawStep {
                    n: r.n,
                    a: r.a_hat.scale(&Rational::from(s.kappa.recip_ref())),
                    norm: surd_den.scale(&sign(r.n)),
                    surd_den,
                    p: r.p_hat.as_ref().map(|p| p.scale(&s.p_factor())),
                    q: r.q_hat.as_ref().map(|q| q.scale(&s.q_factor())),
                }
            })
            .collect()
    }

    /// Primitive integer convergent polynomials `(p_hat_n, q_hat_n)` when
    /// retained; index `N + 1` is served from the cursor.
    pub fn primitive_convergent(&self, n: usize) -> Option<(&Poly, &Poly)> {
        if n == self.cursor.next_index {
            return Some((&self.cursor.p_hat, &self.cursor.q_hat));
        }
        let r = self.records.get(n)?;
        Some((r.p_hat.as_ref()?, r.q_hat.as_ref()?))
    }

    /// Convergent `(p_n, q_n)` when retained.
    pub fn convergent(&self, n: usize) -> Option<(Poly, Poly)> {
        let (p, q) = self.primitive_convergent(n)?;
        let s = self.scales(n).pop()?;
        Some((p.scale(&s.p_factor()), q.scale(&s.q_factor())))
    }

    pub fn is_thin(&self) -> bool {
        self.records.iter().any(StepRecord::is_thin)
    }

    /// Fresh lazy expansion of `sqrt(D)`.
    pub fn sqrt_series(&self) -> TailSeries {
        sqrt_series(&self.radicand).expect("validated radicand")
    }

    /// Appends records until record `last_index` exists.
    pub fn extend_to(&mut self, last_index: usize) -> Result<()> {
        let one = Rational::from(1);
        while self.cursor.next_index <= last_index {
            let c = &mut self.cursor;
            let n = c.next_index;
            let (a_hat, next_num, w_next, next_den) =
                normalized_step(&self.radicand, &self.a0, &c.surd_num, &c.surd_den_monic, n)?;
            let mixed = next_num.scale(&sign(n));

            let lead = if n == 0 { one.clone() } else { a_hat.lead() };
            let multiplier = if n == 0 { a_hat.clone() } else { a_hat.monic() };
            let beta = if n == 0 {
                one.clone()
            } else {
                Rational::from(&c.w / &c.lead_prev) / &lead
            };
            let kp = Rational::from(&beta / &c.p_scale);
            let kq = Rational::from(&beta / &c.q_scale);
            let (p_next, ps_next) = integer_step(&multiplier, &kp, &c.p_hat, &c.p_hat_prev);
            let (q_next, qs_next) = integer_step(&multiplier, &kq, &c.q_hat, &c.q_hat_prev);

            let p_hat = std::mem::replace(&mut c.p_hat, p_next);
            let q_hat = std::mem::replace(&mut c.q_hat, q_next);
            c.p_hat_prev = p_hat.clone();
            c.q_hat_prev = q_hat.clone();
            let p_scale = std::mem::replace(&mut c.p_scale, ps_next);
            let q_scale = std::mem::replace(&mut c.q_scale, qs_next);
            let w = std::mem::replace(&mut c.w, w_next);
            c.lead_prev = lead;
            let surd_num = std::mem::replace(&mut c.surd_num, next_num);
            let surd_den_monic = std::mem::replace(&mut c.surd_den_monic, next_den);
            c.next_index = n + 1;

            self.records.push(StepRecord {
                n,
                deg_a: a_hat.degree().unwrap_or(0),
                a_hat,
                surd_num,
                surd_den_monic,
                w,
                beta,
                deg_p: p_hat.degree(),
                deg_q: q_hat.degree(),
                p_hat: Some(p_hat),
                q_hat: Some(q_hat),
                p_scale,
                q_scale,
                convergent_digest: None,
                mixed,
            });
            self.apply_thinning();
        }
        Ok(())
    }

    /// Appends `extra` further records.
    pub fn extend_by(&mut self, extra: usize) -> Result<()> {
        if extra == 0 {
            return Ok(());
        }
        self.extend_to(self.cursor.next_index + extra - 1)
    }

    /// Drops convergents outside the retention window.
    pub fn apply_thinning(&mut self) {
        let Some(window) = self.options.thin_window else {
            return;
        };
        let keep_from = self.records.len().saturating_sub(window);
        for r in &mut self.records[..keep_from] {
            if !r.is_thin() && !self.options.pinned.contains(&r.n) {
                r.thin();
            }
        }
    }

    /// Changes the retention policy; already dropped convergents stay dropped.
    pub fn set_options(&mut self, options: ExpandOptions) {
        self.options = options;
        self.apply_thinning();
    }

    /// Keeps only records `0..=last_index`, rebuilding the cursor from the
    /// records that follow.
    pub fn truncated(&self, last_index: usize) -> Result<ExpansionTranscript> {
        let keep = last_index + 1;
        if keep > self.records.len() {
            return Err(Error::MissingData(format!(
                "transcript has only {} records",
                self.records.len()
            )));
        }
        if keep == self.records.len() {
            return Ok(self.clone());
        }
        let next = &self.records[keep];
        let last = &self.records[last_index];
        let missing = || Error::MissingData("convergents near the cut were thinned".into());
        let (Some(p), Some(q)) = (&next.p_hat, &next.q_hat) else {
            return Err(missing());
        };
        let (Some(pp), Some(qp)) = (&last.p_hat, &last.q_hat) else {
            return Err(missing());
        };
        let mut out = self.clone();
        out.records.truncate(keep);
        out.cursor = Cursor {
            next_index: keep,
            surd_num: next.surd_num.clone(),
            surd_den_monic: next.surd_den_monic.clone(),
            w: next.w.clone(),
            lead_prev: if last_index == 0 {
                Rational::from(1)
            } else {
                last.a_hat.lead()
            },
            p_hat: p.clone(),
            q_hat: q.clone(),
            p_scale: next.p_scale.clone(),
            q_scale: next.q_scale.clone(),
            p_hat_prev: pp.clone(),
            q_hat_prev: qp.clone(),
        };
        Ok(out)
    }
}

/// SHA-256 over the decimal strings of `p_hat` and `q_hat`, hex encoded.
pub fn convergent_digest(p_hat: &Poly, q_hat: &Poly) -> String {
    let json = serde_json::to_string(&(p_hat, q_hat)).expect("serialisable");
    hex::encode(Sha256::digest(json.as_bytes()))
}
