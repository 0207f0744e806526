use thiserror::Error;

/// Failure classes. Each maps to one process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("numeric error: {0}")]
    Numeric(#[from] gns_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => crate::EXIT_INPUT,
            CliError::Numeric(_) => crate::EXIT_NUMERIC,
        }
    }
}
