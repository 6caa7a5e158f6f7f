use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by graph construction, filtering, explanation functions,
/// pipelines and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("graph has {n} nodes, too many for dense eigendecomposition (cap {cap}); raise the cap or analyse a subgraph")]
    TooLarge { n: usize, cap: usize },

    #[error("operator is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("labels must be binary, found {0} distinct values")]
    NonBinaryLabels(usize),

    #[error("missing reference samples for class {0}")]
    MissingClass(i64),

    #[error("scores are all zero; no sampling distribution exists")]
    ZeroDistribution,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("row count mismatch: {left_name} has {left} rows, {right_name} has {right} rows")]
    RowMismatch {
        left_name: String,
        left: usize,
        right_name: String,
        right: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
