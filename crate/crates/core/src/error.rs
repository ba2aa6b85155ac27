use thiserror::Error;

use crate::pnm::PnmError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("invalid grid {width}x{height}: both sides must be at least 1")]
    EmptyGrid { width: usize, height: usize },

    #[error("value buffer has {actual} entries, grid needs {expected}")]
    BufferLength { expected: usize, actual: usize },

    #[error("pixel value {value} at index {index} is not binary")]
    NotBinary { index: usize, value: u32 },

    #[error("expected {expected} threshold levels, got {actual}")]
    LevelCount { expected: usize, actual: usize },

    #[error("thresholds must be strictly increasing (position {position})")]
    NonIncreasingThresholds { position: usize },

    #[error("index labels must be strictly increasing (position {position})")]
    NonIncreasingLabels { position: usize },

    #[error("filtration is not nested between positions {lower} and {upper}")]
    NotNested { lower: usize, upper: usize },

    #[error("structuring element must contain the origin")]
    MissingOrigin,

    #[error("invalid structuring element sequence: {0}")]
    InvalidSequence(String),

    #[error("{construction} requires the square structuring element family")]
    UnsupportedFamily { construction: &'static str },

    #[error("multi-index entry {entry} outside 0..=±{max}")]
    IndexOutOfRange { entry: i32, max: usize },

    #[error("multi-index must have at least one entry")]
    EmptyMultiIndex,

    #[error("path nodes {position} and {next} are not in nondecreasing order")]
    NotNondecreasing { position: usize, next: usize },

    #[error("index not present in family")]
    UnknownIndex,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("noise density {0} outside [0, 1]")]
    InvalidDensity(f64),

    #[error(transparent)]
    Pnm(#[from] PnmError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
