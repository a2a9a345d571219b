//! Error type shared across the simulator.

use thiserror::Error;

/// Errors produced by field construction, evolution and I/O operations.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input that is structurally valid but numerically degenerate,
    /// e.g. a zero field handed to `normalize`.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unsupported boundary: {0}")]
    UnsupportedBoundary(String),

    /// A numerical contract was violated at run time (e.g. an observable
    /// received an unnormalized field).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;

impl SimError {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::ContractViolation(_) => 3,
            SimError::Io(_) => 4,
            _ => 2,
        }
    }
}
