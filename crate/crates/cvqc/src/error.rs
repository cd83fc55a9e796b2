//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by instance construction, key handling, protocol
/// execution, and artifact (de)serialization.
#[derive(Debug, Error)]
pub enum Error {
    /// A Hamiltonian instance violates a structural requirement.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A vector or message has the wrong dimension for the operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Parameters exceed the simulator's intended scale.
    #[error("parameter out of supported range: {0}")]
    ParameterRange(String),

    /// A serialized key or message failed to parse.
    #[error("malformed encoding: {0}")]
    Encoding(String),

    /// A protocol participant produced a structurally unusable message.
    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
