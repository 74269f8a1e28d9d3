//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by any ddmm component.
///
/// `NonFinite` is the "numeric failure" class (exit code 2 in the CLI);
/// everything else is treated as a validation or I/O failure (exit code 1).
#[derive(Debug, Error)]
pub enum DdmmError {
    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("timestep {t} out of range 1..={t_max}")]
    TimestepOutOfRange { t: usize, t_max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("data error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl DdmmError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        DdmmError::InvalidArgument(msg.into())
    }

    pub fn non_finite(context: impl Into<String>) -> Self {
        DdmmError::NonFinite {
            context: context.into(),
        }
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            DdmmError::NonFinite { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, DdmmError>;
