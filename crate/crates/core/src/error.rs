use thiserror::Error;

/// Errors produced while loading clouds, building invariants or comparing them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range for a cloud of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate index {0} in subset")]
    DuplicateIndex(usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("coordinate {coordinate} has zero standard deviation, standardized moment undefined")]
    DegenerateMoment { coordinate: usize },

    #[error("inconsistent distances: squared volume {squared_volume:e} is below the tolerance {tolerance:e}")]
    InvalidMetric { squared_volume: f64, tolerance: f64 },

    #[error("non-finite cost at entry ({row}, {col})")]
    NonFiniteCost { row: usize, col: usize },

    #[error("infeasible weights: {0}")]
    InfeasibleWeights(String),

    #[error("linear assignment cost requires uncollapsed distributions with equal weights")]
    CollapsedInput,

    #[error("{what} of size {size} exceeds the brute-force guard {guard}")]
    GuardExceeded {
        what: &'static str,
        size: usize,
        guard: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
