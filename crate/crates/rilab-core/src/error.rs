use thiserror::Error;

/// Failure modes of the numerical routines.
///
/// Quadrature and root-finding report *why* they gave up, so campaign code can
/// distinguish a genuinely divergent integral from an exhausted budget.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{context}: error estimate {estimate:.3e} above tolerance {tolerance:.3e}")]
    QuadratureFailure {
        context: String,
        estimate: f64,
        tolerance: f64,
    },

    #[error("integral diverges: {0}")]
    DivergentIntegral(String),

    #[error("root bracketing failed: {0}")]
    RootFailure(String),

    #[error("empty or unusable grid: {0}")]
    EmptyGrid(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("norm evaluation failed in {space}: {reason}")]
    NormFailure { space: String, reason: String },

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
