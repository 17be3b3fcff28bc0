use thiserror::Error;

/// Errors raised by the geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point {point:?} is not inside the domain {domain}")]
    OutsideDomain { domain: String, point: Vec<f64> },
    #[error("coincident points")]
    CoincidentPoints,
    #[error("zero point is not allowed here")]
    ZeroPoint,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("path leaves the domain")]
    PathExitsDomain,
    #[error("grid resolution too coarse: {0}")]
    Resolution(String),
    #[error("no convergence; distance bracket is [{lower}, {upper}]")]
    NonConvergence { lower: f64, upper: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
