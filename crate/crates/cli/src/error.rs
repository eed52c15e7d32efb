use thiserror::Error;

/// Failures mapped onto the process exit-code contract.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<sumdiff::Error> for CliError {
    fn from(e: sumdiff::Error) -> Self {
        match e {
            sumdiff::Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            other => CliError::Verification(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
