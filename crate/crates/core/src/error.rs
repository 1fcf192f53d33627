use thiserror::Error;

use crate::cyclo::CycloError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid data: {0}")]
    Validation(String),
    #[error("identity check failed: {0}")]
    Identity(String),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("enumeration budget of {0} sets exceeded")]
    Budget(usize),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

impl Error {
    /// Process exit status for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Validation(_) => 1,
            Error::Identity(_) => 2,
            Error::Reconstruction(_) => 3,
            Error::Precondition(_) | Error::Budget(_) => 4,
            Error::Cyclo(CycloError::NoCandidate { .. }) | Error::Cyclo(CycloError::ConductorTooLarge(_)) => 3,
            Error::Cyclo(CycloError::Parse(_)) => 1,
            Error::Cyclo(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
