//! Error type shared across the crate.

use std::path::PathBuf;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid header in {path}: {reason}")]
    Header { path: PathBuf, reason: String },

    #[error("raw data holds {actual} values but the header declares {expected}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("non-finite value at linear index {index}")]
    NonFinite { index: usize },

    #[error("dimensions must be positive, got {0}x{1}x{2}")]
    InvalidDims(usize, usize, usize),

    #[error("data length {actual} does not match dimensions ({expected} values)")]
    DataLength { expected: usize, actual: usize },

    #[error("{dim}D direction set needs at least {min} directions, got {k}")]
    DirectionCount { dim: u8, min: usize, k: usize },

    #[error("{set_dim}D direction set applied to a {vol_dim}D volume")]
    DimensionMismatch { set_dim: u8, vol_dim: u8 },

    #[error("direction must have unit length, got norm {norm}")]
    NonUnitDirection { norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("skeleton node {id} is outside the target grid after rounding")]
    NodeOutOfBounds { id: u64 },

    #[error("skeleton edge references missing node {id}")]
    DanglingEdge { id: u64 },

    #[error("invalid skeleton graph: {0}")]
    InvalidGraph(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
