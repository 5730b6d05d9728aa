use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("metric is not symmetric: max |g_ij - g_ji| = {deviation:e}")]
    AsymmetricMetric { deviation: f64 },
    #[error("metric is degenerate: {reason}")]
    DegenerateMetric { reason: String },
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no minimal integrity basis is available for a {0} tensor")]
    UnsupportedClass(String),
    #[error("root iteration did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("stress block T is not symmetric: max |T_ij - T_ji| = {deviation:e}")]
    AsymmetricBlock { deviation: f64 },
    #[error("tensor is not traceless: trace = {trace:e}, tolerance = {tolerance:e}")]
    NotTraceless { trace: f64, tolerance: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable variant name, used as the `error` field of JSON output.
    pub fn name(&self) -> &'static str {
        match self {
            Error::AsymmetricMetric { .. } => "AsymmetricMetric",
            Error::DegenerateMetric { .. } => "DegenerateMetric",
            Error::InvalidDimension(_) => "InvalidDimension",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::UnsupportedClass(_) => "UnsupportedClass",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::AsymmetricBlock { .. } => "AsymmetricBlock",
            Error::NotTraceless { .. } => "NotTraceless",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
