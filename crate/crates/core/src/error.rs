use thiserror::Error;

use crate::grammar::ParseError;

/// Errors raised by the computational modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid prime power {prime}^{exp}")]
    InvalidPrimePower { prime: u64, exp: u32 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unsupported coefficients: {0}")]
    UnsupportedCoefficients(String),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("degree {requested} exceeds the computed range 0..={max_degree}")]
    DegreeOutOfRange { requested: usize, max_degree: usize },
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("coefficient rings differ")]
    CoefficientMismatch,
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("boundary maps do not compose to zero at degree {0}")]
    NonZeroSquare(usize),
    #[error("boundary map dimensions do not compose at degree {0}")]
    DimensionMismatch(usize),
    #[error("inconsistent query: {0}")]
    InconsistentQuery(String),
    #[error("rewrite not justified: {0}")]
    RewriteNotJustified(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
