use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite measurement at index {index}: {value}")]
    NonFiniteMeasurement { index: usize, value: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("zero power in {0}; SNR undefined")]
    ZeroPower(&'static str),

    #[error("unknown output format `{0}` (expected csv or json)")]
    UnknownFormat(String),

    #[error("scenario {scenario}, trial {trial}: {source}")]
    Trial {
        scenario: usize,
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad configuration or usage rather than runtime failure.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::InvalidParameter { .. } | Error::UnknownFormat(_) => true,
            Error::Format { .. } => true,
            Error::Trial { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
