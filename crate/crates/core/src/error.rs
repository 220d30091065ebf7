use thiserror::Error;

use crate::words::Composition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("constant term must be {expected} (found {found})")]
    WrongConstantTerm { expected: String, found: String },
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("word {0} is not of composition form")]
    NotCompositionForm(String),
    #[error("composition {0} is not admissible")]
    Inadmissible(Composition),
    #[error("element is not primitive (not a Lie series)")]
    NotPrimitive,
    #[error("combination is not weight-homogeneous")]
    NonHomogeneous,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

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
