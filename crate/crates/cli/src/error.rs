//! CLI error type with the pipeline's exit-code contract:
//! 0 success, 2 usage, 3 format/IO, 4 domain, 5 numeric.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Format(String),
    Domain(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Format(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Numeric(_) => 5,
        }
    }

    pub fn io(context: &str, err: std::io::Error) -> Self {
        CliError::Format(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Format(m) => write!(f, "format error: {m}"),
            CliError::Domain(m) => write!(f, "domain error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<isar_core::Error> for CliError {
    fn from(e: isar_core::Error) -> Self {
        match e {
            // Shape problems are input-domain problems from the CLI's view.
            isar_core::Error::Shape(m) => CliError::Domain(format!("shape mismatch: {m}")),
            isar_core::Error::Domain(m) => CliError::Domain(m),
            isar_core::Error::Numeric(m) => CliError::Numeric(m),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
