use alloc::string::String;
use thiserror::Error;

/// Malformed scenarios, solutions or parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("minimum segment length must be positive and finite, got {0}")]
    MinSegment(f64),
    #[error("imaging data #{index} (n={id}): {reason}")]
    Data { index: usize, id: u32, reason: String },
    #[error("playback window #{index} (m={id}): {reason}")]
    Window { index: usize, id: u32, reason: String },
    #[error("{what} must be sorted by start time (entry #{index} starts before its predecessor)")]
    Unsorted { what: &'static str, index: usize },
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    Dimension { what: &'static str, expected: usize, found: usize },
    #[error("invalid parameter {name}: {reason}")]
    Parameter { name: &'static str, reason: String },
}
