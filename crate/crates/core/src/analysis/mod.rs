//! Detectors and experiments built on expansion transcripts: Pell solutions,
//! periodicity of the degree sequence, height growth, zeros of the
//! denominators, the twisted expansion of `(t - rho) sqrt(D)`, and the
//! identities of the genus-one case.

mod elliptic;
mod hankel;
mod heights;
mod mcmullen;
mod pell;
mod period;
mod square_divisors;
mod zeros;

pub use elliptic::{elliptic_identities, EllipticIdentityReport};
pub use hankel::{hankel_cross_check, HankelReport};
pub use heights::{height_series, HeightRow, HeightSeries};
pub use mcmullen::{mcmullen_cross_reference, mcmullen_experiment, CrossReference, McMullenReport};
pub use pell::{pell_check, pell_from_transcript, PellReport, PellVerdict};
pub use period::{detect_degree_period, fit_degq_formula, DegQFit, DegreePeriodReport, DEFAULT_MIN_CONFIRM};
pub use square_divisors::{square_divisor_scan, theorem12_check, Branch, SquareDivisor, TailCheck, DegreeBoundReport};
pub use zeros::{eval_integer_poly_is_zero, zero_occurrences, zero_occurrences_streaming, ProbeOccurrences, ZeroOccurrences};

use crate::engine::{ExpandOptions, ExpansionTranscript};
use crate::error::Result;
use crate::poly::Poly;

/// Expands `sqrt(D)` through record `last_index`, calling `visit` after each
/// record is appended. Only the newest record keeps its convergents, so
/// memory stays bounded by one step.
pub fn stream_expansion<F>(radicand: &Poly, last_index: usize, mut visit: F) -> Result<ExpansionTranscript>
where
    F: FnMut(&ExpansionTranscript, usize) -> Result<bool>,
{
    let mut tr = ExpansionTranscript::start(radicand, ExpandOptions::thin(1))?;
    for n in 0..=last_index {
        tr.extend_to(n)?;
        if !visit(&tr, n)? {
            break;
        }
    }
    Ok(tr)
}
