use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error("parse error at line {line}: {msg}")]
    ParseAt { line: usize, msg: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("height bound violated: {0}")]
    HeightBound(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }
}
