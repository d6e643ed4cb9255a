use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sampling budget of {budget} candidates exhausted with {collected} free samples")]
    InfeasibleSampling { budget: usize, collected: usize },
    #[error("goal region is blocked: no free goal sample within {budget} candidates")]
    GoalBlocked { budget: usize },
    /// A problem or campaign file field failed to parse or validate.
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("graph cache: {0}")]
    Cache(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

pub(crate) fn field(path: impl Into<String>, message: impl std::fmt::Display) -> Error {
    Error::Field { path: path.into(), message: message.to_string() }
}
