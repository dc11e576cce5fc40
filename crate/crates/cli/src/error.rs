//! CLI-level error classification: configuration problems exit with 1,
//! numerical failures inside the library exit with 2.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Anything wrong with the invocation or the config document:
    /// unreadable files, parse errors, missing sections, out-of-range
    /// parameters.
    Config(String),
    /// The library failed numerically while executing a validated
    /// configuration; carries the name of the failing operation.
    Numerical { operation: String, source: frqme_core::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical { .. } => 2,
        }
    }

    /// Wraps a library error raised by `operation`, classifying
    /// parameter rejections as configuration errors (the values came
    /// straight from the config document).
    pub fn from_library(operation: &str, source: frqme_core::Error) -> Self {
        match source {
            frqme_core::Error::ParamOutOfRange(msg) => {
                CliError::Config(format!("{operation}: {msg}"))
            }
            other => CliError::Numerical { operation: operation.to_string(), source: other },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numerical { operation, source } => {
                write!(f, "numerical failure in {operation}: {source}")
            }
        }
    }
}

impl std::error::Error for CliError {}

pub type Result<T> = std::result::Result<T, CliError>;
