use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed CoNLL-U line.
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    /// A sentence whose head links do not form a rooted tree.
    #[error("sentence {sentence}: {message}")]
    Structure { sentence: String, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("not a wh-question: {0}")]
    NotWhQuestion(String),

    #[error("question analysis failed: {0}")]
    Analysis(String),

    #[error("transformation of {id} failed: {message}")]
    Transform { id: String, message: String },

    /// A dataset or data-file line that does not match its declared schema.
    #[error("{path}:{line}: {message}")]
    Load {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
