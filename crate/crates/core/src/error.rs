use std::path::PathBuf;

use thiserror::Error;

use crate::config::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {}", format_violations(.0))]
    InvalidConfig(Vec<Violation>),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("scatterer {index} rejected: {reason}")]
    OutOfBounds { index: usize, reason: String },

    #[error("snapshot is all zero, no angle can be estimated")]
    NoAngle,

    #[error("undefined metric: {0}")]
    UndefinedMetric(&'static str),

    #[error("empty result: {0}")]
    Empty(String),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attaches a file path to an error raised while handling that file.
    pub fn at(self, path: impl Into<PathBuf>) -> Error {
        Error::File {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with any path context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::File { source, .. } => source.root(),
            other => other,
        }
    }
}

/// Malformed persisted data. Each variant is a distinct failure code.
#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("bad magic {0:?}")]
    BadMagic([u8; 4]),

    #[error("unsupported version {0}")]
    UnsupportedVersion(u32),

    #[error("truncated payload: expected {expected} bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },

    #[error("trailing data: expected {expected} bytes, found {actual}")]
    TrailingData { expected: u64, actual: u64 },

    #[error("dimension overflow in header")]
    DimOverflow,

    #[error("invalid header: {0}")]
    InvalidHeader(String),

    #[error("line {line}: {message}")]
    Row { line: u64, message: String },

    #[error("unexpected header: {0}")]
    Columns(String),

    #[error("{0}")]
    Text(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("{} ({})", v.code.as_str(), v.message))
        .collect::<Vec<_>>()
        .join("; ")
}
