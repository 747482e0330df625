//! Exact continued fractions of `sqrt(D(t))` for polynomials `D` over the
//! rationals, together with the diagnostics built on top of them.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod factor;
pub mod numbers;
pub mod poly;
pub mod series;

pub use error::{Error, Result};
pub use numbers::{parse_rational, Integer, Rational, RationalVector};
pub use poly::{squarefree_decomposition, Poly, SquarefreeDecomposition};
pub use series::{pade_convergent, sqrt_series, TailSeries};
pub use engine::{
    expand, expand_with, normalize_radicand, read_transcript, verify_identities, write_transcript, ExpandOptions, ExpansionTranscript,
    IdentityReport, Normalization, RawStep, Scales, StepRecord, SurdState, TranscriptHeader, FORMAT_VERSION,
};
pub use factor::{factor_mod_p, factor_over_q, FactorList};
