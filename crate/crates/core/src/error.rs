//! Error type shared by every module in the crate.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, HsiError>;

#[derive(Debug, thiserror::Error)]
pub enum HsiError {
    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("non-finite value at flat index {index}")]
    NonFinite { index: usize },

    #[error("value {value} at flat index {index} is outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },

    #[error("band index {index} out of range for {bands} bands")]
    BandIndex { index: usize, bands: usize },

    #[error("band {band} of the reference image has zero mean")]
    ZeroBandMean { band: usize },

    #[error("invalid scale factor {value}: {reason}")]
    InvalidScale { value: f64, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("container at {path}: {reason}")]
    Container { path: PathBuf, reason: String },

    #[error("checkpoint at {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error("diverged at step {step}: {what}")]
    Diverged { step: usize, what: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed csv input: {0}")]
    Csv(String),
}

impl HsiError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HsiError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            HsiError::Diverged { .. } => 2,
            HsiError::Io { .. } => 3,
            _ => 1,
        }
    }
}
