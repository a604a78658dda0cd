use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("graph is not folded; fold it before {0}")]
    NotFolded(&'static str),

    #[error("relator {index} is not cyclically reduced")]
    NotCyclicallyReduced { index: usize },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{stage}: {message}")]
    Stage { stage: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
