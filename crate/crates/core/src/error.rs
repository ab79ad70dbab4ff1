use thiserror::Error;

/// Errors raised by the library. Every variant maps to a usage or data
/// problem; numeric checks report failures through reports, not errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("odd dimension {0} where an even dimension is required")]
    OddDimension(usize),
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown check id: {0}")]
    UnknownCheck(String),
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("not invariant: {0}")]
    NotInvariant(String),
    #[error("structural failure: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, Error>;
