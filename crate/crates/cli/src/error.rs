use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input text or an unreadable file.
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] hk_core::Error),
    /// A self-check inside a command failed.
    #[error("{0}")]
    Inconsistent(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
