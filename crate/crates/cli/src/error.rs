//! Error type of the CLI, carrying the process exit code.
//!
//! Exit codes: 0 success, 1 usage error (bad flags or parameter values),
//! 2 data error (unreadable or invalid input data, unsatisfiable process
//! preconditions), 3 internal error (output I/O failures).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn usage(err: impl std::fmt::Display) -> Self {
        CliError::Usage(err.to_string())
    }

    pub fn data(err: impl std::fmt::Display) -> Self {
        CliError::Data(err.to_string())
    }

    pub fn internal(err: impl std::fmt::Display) -> Self {
        CliError::Internal(err.to_string())
    }
}
