use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or parameter combinations; exit code 2.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] bounce_core::Error),

    /// A `verify` run found a violation; exit code 1.
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            // Parameter values outside the physical domain are a usage problem.
            CliError::Core(bounce_core::Error::Domain { .. }) => 2,
            CliError::Core(bounce_core::Error::UnsupportedModel { .. }) => 2,
            CliError::Core(_) | CliError::Io(_) | CliError::VerificationFailed => 1,
        }
    }
}
