use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag combinations; exit status 2.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Data(#[from] boxcast_core::Error),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) | CliError::Io(_) => 1,
        }
    }
}
