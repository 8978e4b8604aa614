use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("matrix has {tokens} tokens after skipping, which is not a perfect square")]
    NonSquare { tokens: usize },

    #[error("token {position} is `{token}`, expected 0 or 1")]
    NonBinary { position: usize, token: String },

    #[error("matrix is not symmetric at ({row}, {col}); load it as directed")]
    Asymmetric { row: usize, col: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }

    pub(crate) fn degenerate(message: impl Into<String>) -> Self {
        Error::Degenerate(message.into())
    }

    /// True for errors caused by malformed input or I/O rather than bad arguments.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Io(_)
                | Error::Parse { .. }
                | Error::NonSquare { .. }
                | Error::NonBinary { .. }
                | Error::Asymmetric { .. }
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
