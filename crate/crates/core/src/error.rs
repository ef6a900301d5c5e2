//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation at (or numerically at) a pole.
    #[error("pole: {0}")]
    Pole(String),
    /// Numerical tolerance could not be met; carries the best estimate's description.
    #[error("accuracy not reached: {0}")]
    Accuracy(String),
    /// Continuous branch of a logarithm could not be tracked.
    #[error("branch tracking failed: {0}")]
    Branch(String),
    /// Zero finder / counter disagreement or refinement failure.
    #[error("zero computation: {0}")]
    Zeros(String),
    /// Malformed user input or file.
    #[error("input error: {0}")]
    Input(String),
    /// Parameter constraint violation.
    #[error("invalid parameters: {0}")]
    Params(String),
    /// A quantity whose order cannot be decided numerically.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
