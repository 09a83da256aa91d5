use borel_pde::BorelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Borel(#[from] BorelError),
    #[error("cannot write {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    /// 1 for bad input, 2 for numerical failure, 3 for a failed check.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Borel(BorelError::InvalidParameter { .. } | BorelError::SectorViolation { .. }) => 1,
            CliError::Borel(_) | CliError::Io { .. } => 2,
            CliError::Validation(_) => 3,
        }
    }
}
