use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("point set must be nonempty")]
    Empty,

    #[error("coordinate is not finite: {0}")]
    NonFinite(f64),

    #[error("scale factor must be nonnegative, got {0}")]
    NegativeScale(f64),

    #[error("cardinality {size} exceeds the exact-mode cap of {cap} points; supply a prune budget")]
    CardinalityOverflow { size: usize, cap: usize },

    #[error("weights are not a point of the simplex: {0}")]
    OffSimplex(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("atom {index} is not in convex position; enable convexify")]
    NonConvexAtom { index: usize },

    #[error("term {index} is not within epsilon of any net center")]
    NotCovered { index: usize },

    #[error("window {window} is invalid for {rows} rows")]
    InvalidWindow { window: usize, rows: usize },

    #[error("direction grids differ")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
