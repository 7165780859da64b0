use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("no labeled examples: the class count cannot be determined")]
    NoLabels,

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("constraint matrix is not positive definite; add a regularizer (epsilon > 0)")]
    NotPositiveDefinite,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("undefined ratio: no pair has cost above {threshold}")]
    EmptyPairSet { threshold: f64 },

    #[error("split error: {0}")]
    Split(String),

    #[error("cross-validation failed: every fold was skipped")]
    AllFoldsSkipped,

    #[error("all {0} realizations failed")]
    AllRealizationsFailed(usize),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("model file error: {0}")]
    Format(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
