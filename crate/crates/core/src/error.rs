use std::path::PathBuf;

/// Errors produced by the detectors, the evaluation harness and the IO layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,

    #[error("lag exceeds series (lag {lag}, length {len})")]
    LagExceedsSeries { lag: usize, len: usize },

    #[error("series too short: need at least {min} points, got {len}")]
    SeriesTooShort { min: usize, len: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("baseline metric zero")]
    BaselineMetricZero,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty train split")]
    EmptyTrain,

    #[error("empty test split")]
    EmptyTest,

    #[error("inconsistent synthetic spec: {0}")]
    InvalidSynthSpec(String),

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: row {row}: {message}")]
    Row {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
