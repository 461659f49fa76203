use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The model returned NaN from `log_likelihood` (or `perturb`).
    #[error("model produced NaN {what}; parameters: {params}")]
    NanValue { what: &'static str, params: String },

    #[error("sample {row} references level {level}, but only {num_levels} levels exist")]
    MissingLevel {
        row: usize,
        level: usize,
        num_levels: usize,
    },

    #[error("no saved samples lie above level {level}")]
    EmptyThresholdLevel { level: usize },

    #[error("no samples to process")]
    NoSamples,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
