use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation (zero inverse, singular matrix, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Request exceeds the supported size envelope.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Parameters that are individually valid but do not fit together.
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not irreducible: {0}")]
    NotIrreducible(String),
    /// A numerical procedure failed in a way that should not happen for valid input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
