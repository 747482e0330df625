use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("height of the zero vector is undefined")]
    ZeroVector,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial has odd degree {0}")]
    OddDegree(usize),
    #[error("polynomial is constant; a positive even degree is required")]
    ConstantPolynomial,
    #[error("leading coefficient {0} is not the square of a rational")]
    NotASquareLead(String),
    #[error("polynomial is a perfect square")]
    PerfectSquare,
    #[error("prime {0} divides the leading coefficient; choose another prime")]
    ChooseAnotherPrime(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("the radicand vanishes at the probe point {0}")]
    ProbeIsRoot(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("invalid transcript: {0}")]
    Transcript(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, stable across releases; used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroVector => "ZeroVector",
            Error::DivisionByZero => "DivisionByZero",
            Error::GcdOfZeros => "GcdOfZeros",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::OddDegree(_) => "OddDegree",
            Error::ConstantPolynomial => "ConstantPolynomial",
            Error::NotASquareLead(_) => "NotASquareLead",
            Error::PerfectSquare => "PerfectSquare",
            Error::ChooseAnotherPrime(_) => "ChooseAnotherPrime",
            Error::NotPrime(_) => "NotPrime",
            Error::Parse { .. } => "Parse",
            Error::ProbeIsRoot(_) => "ProbeIsRoot",
            Error::MissingData(_) => "MissingData",
            Error::Transcript(_) => "Transcript",
            Error::Invariant(_) => "Invariant",
        }
    }

    /// Whether the error rejects the input radicand itself.
    pub fn is_invalid_radicand(&self) -> bool {
        matches!(
            self,
            Error::ZeroPolynomial
                | Error::OddDegree(_)
                | Error::ConstantPolynomial
                | Error::NotASquareLead(_)
                | Error::PerfectSquare
                | Error::ProbeIsRoot(_)
        )
    }
}
