use std::fmt;

use tomo_core::TomoError;

/// Failure of a command, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// A state descriptor that names no library state.
    UnknownState(String),
    /// Malformed input file, flag value or configuration.
    Input(String),
    /// Reading or writing a file failed.
    Io(String),
    /// A numerical routine refused the request.
    Numeric(TomoError),
    /// A check suite ran to completion with failures.
    CheckFailed(usize),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::CheckFailed(_) => 1,
            Self::UnknownState(_) | Self::Input(_) | Self::Io(_) => 2,
            Self::Numeric(_) => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::UnknownState(_) => "UnknownState",
            Self::Input(_) => "InvalidInput",
            Self::Io(_) => "IoError",
            Self::Numeric(e) => e.name(),
            Self::CheckFailed(_) => "CheckFailed",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownState(s) => write!(f, "UnknownState: {s}"),
            Self::Input(s) => write!(f, "InvalidInput: {s}"),
            Self::Io(s) => write!(f, "IoError: {s}"),
            Self::Numeric(e) => write!(f, "{}: {e}", e.name()),
            Self::CheckFailed(n) => write!(f, "CheckFailed: {n} check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<TomoError> for CliError {
    fn from(e: TomoError) -> Self {
        Self::Numeric(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
