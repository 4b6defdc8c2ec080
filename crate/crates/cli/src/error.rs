use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent input.
    #[error("{0}")]
    Validation(String),
    /// A computed residual exceeded the tolerance.
    #[error("{0}")]
    Breach(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Breach(_) => ExitCode::from(1),
            CliError::Validation(_) | CliError::Io(_) => ExitCode::from(2),
        }
    }
}

impl From<ncszego_core::Error> for CliError {
    fn from(e: ncszego_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
