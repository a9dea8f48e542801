use std::io;

use majority_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or input: exit code 2.
    #[error("{0}")]
    Usage(String),
    /// The command ran but could not complete: exit code 1.
    #[error("{0}")]
    Failure(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::MemoLimitExceeded { .. } => CliError::Failure(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}
