//! CLI error type with script-friendly exit codes.

use ged_core::io::{DatasetError, FileError, GenError, ParseError};
use ged_core::{EngineError, OracleError};
use thiserror::Error;

/// Everything a command can fail with, sorted into three exit classes:
/// `1` for bad invocations, `2` for unreadable or malformed inputs, `3` for
/// computations that hit a capacity or budget wall.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Capacity(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::ZeroK | EngineError::Costs(_) => CliError::Usage(e.to_string()),
            _ => CliError::Capacity(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => {
                CliError::Usage(format!("{e}; use the approximate engine instead"))
            }
            OracleError::BudgetExceeded { .. } => CliError::Capacity(e.to_string()),
            OracleError::Engine(inner) => inner.into(),
        }
    }
}

/// Attaches a file path to a bare I/O error.
pub fn io_error(path: &std::path::Path, source: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {source}", path.display()))
}
