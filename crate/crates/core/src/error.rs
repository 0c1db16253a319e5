use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty dictionary")]
    EmptyDictionary,

    #[error("line {line}: duplicate entry `{surface}` ({kind})")]
    DuplicateEntry {
        line: usize,
        surface: String,
        kind: &'static str,
    },

    #[error("entry `{surface}` has score {score} outside the scale [{min}, {max}]")]
    ScoreOutOfScale {
        surface: String,
        score: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid score scale: {0}")]
    InvalidScale(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no signal: {0}")]
    NoSignal(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("training split contains a single class")]
    SingleClass,

    #[error("json: {0}")]
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

pub type Result<T> = std::result::Result<T, Error>;

/// A value together with the non-fatal warnings produced while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

impl<T> Outcome<T> {
    pub fn new(value: T) -> Self {
        Outcome {
            value,
            warnings: Vec::new(),
        }
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        let message = message.into();
        log::warn!("{message}");
        self.warnings.push(message);
    }

    pub fn into_value(self) -> T {
        self.value
    }
}
