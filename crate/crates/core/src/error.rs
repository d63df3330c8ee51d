use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing required column `{0}`")]
    Schema(String),

    #[error("row {row}: {message}")]
    Row { row: u64, message: String },

    #[error("empty corpus: {0}")]
    EmptyCorpus(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("index {index} out of range (0..{len})")]
    Index { index: usize, len: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("lexicon {path}:{line}: {message}")]
    Lexicon {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error class: 2 usage/config, 3 data, 4 invariant.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Schema(_)
            | Error::EmptyCorpus(_)
            | Error::Parameter(_)
            | Error::Config(_)
            | Error::Lexicon { .. } => 2,
            Error::Invariant(_) => 4,
            _ => 3,
        }
    }
}
