use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, NrtError>;

#[derive(Debug, Error)]
pub enum NrtError {
    #[error("index out of range: {what} = {index}, bound {bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),

    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),

    /// Every topic is thinned out (or has zero mass) for an observed cell.
    #[error("zero Poisson rate at observed cell (doc {doc}, word {word})")]
    ZeroRate { doc: usize, word: usize },

    #[error("empty slice support for doc {doc}, word {word}")]
    EmptySliceSupport { doc: usize, word: usize },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("word {0} has zero mass in every topic")]
    ZeroWordColumn(usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: expected {expected} word fields, found {found}")]
    InconsistentWidth {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl NrtError {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        NrtError::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            NrtError::Parse { .. } | NrtError::InconsistentWidth { .. } => 3,
            NrtError::InvariantViolation(_)
            | NrtError::ZeroRate { .. }
            | NrtError::EmptySliceSupport { .. } => 4,
            NrtError::Io { .. } | NrtError::Csv(_) | NrtError::Json(_) => 5,
            _ => 2,
        }
    }
}
