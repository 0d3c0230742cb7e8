use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid must be at least 3x3, got {rows}x{cols}")]
    GridTooSmall { rows: usize, cols: usize },

    #[error("grid {rows}x{cols} needs {expected} cells, got {actual}")]
    CellCountMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },

    #[error("invalid cell state {0} (expected 0 or 1)")]
    InvalidState(u8),

    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("sequences have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("correlation is undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("need at least {needed} values, got {actual}")]
    TooFewValues { needed: usize, actual: usize },

    #[error("unknown scenario {0} (expected 1..=4)")]
    UnknownScenario(u8),

    #[error("unknown variation '{0}' (expected a, b or c)")]
    UnknownVariation(String),

    #[error("trajectory has {steps} steps, need at least {needed}")]
    TrajectoryTooShort { steps: usize, needed: usize },

    #[error("malformed {kind} in {path}: {reason}")]
    Parse {
        kind: &'static str,
        path: PathBuf,
        reason: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
