use localh::complex::ComplexError;
use localh::face_ring::LsopError;
use localh::local::LocalError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error("validation: {0}")]
    Validation(String),
    #[error("internal consistency check failed: {0}")]
    Trap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Schema(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Trap(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Schema(_) => "schema",
            CliError::Validation(_) => "validation",
            CliError::Trap(_) => "trap",
        }
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::NotAFace(_) | ComplexError::UnknownVertex(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<LsopError> for CliError {
    fn from(e: LsopError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<LocalError> for CliError {
    fn from(e: LocalError) -> Self {
        match e {
            LocalError::Complex(c) => c.into(),
            LocalError::Trap(_) => CliError::Trap(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
