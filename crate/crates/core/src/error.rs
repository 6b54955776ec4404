use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by the simulation modules.
///
/// The frontend wraps these in its own error type so the CLI can tell
/// simulation failures (exit code 1) apart from usage problems (exit code 2).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported matrix dimension {0} (only 2 and 4)")]
    UnsupportedDimension(usize),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("level index {0} out of range 1..=4")]
    LevelOutOfRange(usize),

    #[error("invalid level pair {upper}-{lower}: {reason}")]
    InvalidPair {
        upper: usize,
        lower: usize,
        reason: &'static str,
    },

    #[error("model error: {0}")]
    Model(&'static str),

    #[error("pulse error: {0}")]
    Pulse(&'static str),

    #[error("evolution error: {0}")]
    Evolution(&'static str),

    #[error("state error: {0}")]
    State(&'static str),

    #[error("signal error: {0}")]
    Signal(&'static str),

    #[error("reference error: {0}")]
    Reference(&'static str),
}
