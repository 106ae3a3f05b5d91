use std::fmt;

use fmcwnet::Error;

/// Process exit status. The numeric values are a stable contract for scripts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Io = 1,
    Config = 2,
    Data = 3,
    Empty = 4,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        CliError {
            exit,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError::new(Exit::Config, message)
    }

    pub fn empty(message: impl Into<String>) -> Self {
        CliError::new(Exit::Empty, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Classifies by the innermost error; the message keeps the file path, if any.
pub fn exit_for(err: &Error) -> Exit {
    match err.root() {
        Error::Io(_) => Exit::Io,
        Error::InvalidConfig(_) | Error::Config(_) => Exit::Config,
        Error::Dimension(_) | Error::OutOfBounds { .. } | Error::NoAngle | Error::Format(_) => {
            Exit::Data
        }
        Error::UndefinedMetric(_) | Error::Empty(_) => Exit::Empty,
        Error::File { .. } => unreachable!("root strips path context"),
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::new(exit_for(&err), err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::new(Exit::Io, err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Wraps an I/O error with the path it concerns.
pub fn io_at(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::new(Exit::Io, format!("{}: {e}", path.display()))
}
