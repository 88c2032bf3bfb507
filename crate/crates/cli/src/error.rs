use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("numerical failure: {0}")]
    Numerical(qflip::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Process exit status: 2 for configuration problems, 3 for numerical
    /// failures, 1 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    /// Core errors raised while running a validated config.
    pub fn from_core(e: qflip::Error, field: &str) -> Self {
        match e {
            qflip::Error::IntegrationFailure { .. } => CliError::Numerical(e),
            other => CliError::config(field, other.to_string()),
        }
    }
}
