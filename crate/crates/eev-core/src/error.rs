use thiserror::Error;

/// Errors surfaced by the core subsystems.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("empty ensemble")]
    EmptyEnsemble,

    #[error("empty integration region: {0}")]
    EmptyRegion(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("linear solve did not converge after {iterations} iterations (residual {residual:.3e})")]
    SolveDiverged { iterations: usize, residual: f64 },

    #[error("non-finite value detected at step {step} ({context})")]
    NonFinite { step: usize, context: String },

    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed data: {0}")]
    Malformed(String),
}
