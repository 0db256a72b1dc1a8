//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by register, encoding, ansatz and training operations.
#[derive(Error, Debug)]
pub enum Error {
    /// Register size outside the supported range.
    #[error("size error: {0}")]
    Size(String),

    /// Qubit or basis-state index out of range.
    #[error("index error: {0}")]
    Index(String),

    /// Mismatched dimensions (register sizes, parameter lengths).
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Value outside its mathematical domain (entries not in {-1,+1}, non-unit norm).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid argument value.
    #[error("argument error: {0}")]
    Argument(String),

    /// Inconsistent neuron, estimator or experiment configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed pattern line, structure string or config file.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
