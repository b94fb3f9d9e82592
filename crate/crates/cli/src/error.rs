use thiserror::Error;

/// Failures of one invocation, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Parse(String),

    #[error("inconsistent knowledge base: no rule of {{{0}}} is tolerated by the others")]
    Inconsistent(String),

    #[error("{0}")]
    Engine(String),

    #[error("oracle check failed")]
    CheckFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Inconsistent(_) => 2,
            _ => 1,
        }
    }
}

impl From<beldef::Error> for CliError {
    fn from(e: beldef::Error) -> Self {
        match e {
            beldef::Error::Syntax { .. }
            | beldef::Error::KbFormat { .. }
            | beldef::Error::CapacityExceeded { .. }
            | beldef::Error::InvalidAtom(_)
            | beldef::Error::DuplicateAtom(_)
            | beldef::Error::VocabularyMismatch { .. } => CliError::Parse(e.to_string()),
            other => CliError::Engine(other.to_string()),
        }
    }
}
