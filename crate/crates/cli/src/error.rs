use std::fmt;
use std::path::Path;

use lingoreward_core::Error;

/// A fatal command failure, split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, config, plan or model contents. Exit code 1.
    Config(String),
    /// Unreadable input or unwritable output. Exit code 2.
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 1,
            Failure::Io(_) => 2,
        }
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        Failure::Io(format!("{}: {err}", path.display()))
    }

    /// Maps a library error found while handling `path`.
    pub fn at(path: &Path, err: Error) -> Self {
        match err {
            Error::Io(e) => Failure::io(path, e),
            other => Failure::Config(format!("{}: {other}", path.display())),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::Io(e) => Failure::Io(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;
