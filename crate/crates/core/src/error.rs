use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error("index set is not closed under decompositions: missing {0}")]
    IndexSetNotClosed(String),

    #[error("moment system is singular: {0}")]
    SingularMomentSystem(String),

    #[error("block map has a non-identity diagonal at {0}")]
    NonIdentityDiagonal(String),

    #[error("rational epsilon surrogate cannot order enumerated grades: {0}")]
    SurrogateOrderViolation(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("numerical abort: {0}")]
    NumericalAbort(String),

    #[error("cutoff too small: {0}")]
    CutoffTooSmall(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
