use thiserror::Error;

/// Errors produced by the separability toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A density matrix or related object violates a numerical invariant
    /// (Hermiticity, unit trace, positivity).
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid state spec: {0}")]
    InvalidSpec(String),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
