use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a structural rule of the diagram or object.
    #[error("validation error: {0}")]
    Validation(String),
    /// Input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// Operation is not defined for this input (e.g. a non-generic diagram).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Numerical evaluation failed or left its domain.
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
