use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("file {0} cannot be recovered from the stored nodes")]
    Unrecoverable(usize),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("simplex pivot limit of {0} reached")]
    IterationLimit(usize),

    #[error("demand lies outside the capacity region")]
    OutsideRegion,

    #[error("unsupported dimension: operation needs K = {expected}, system has K = {got}")]
    UnsupportedDimension { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("outer bound is not known to be tight for an ({n},{k}) code; use the LP oracle")]
    BoundNotTight { n: usize, k: usize },

    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
