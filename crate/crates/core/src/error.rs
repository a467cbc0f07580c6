use thiserror::Error;

/// Errors produced by constructions, counting and verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate construction: {0}")]
    DegenerateConstruction(String),

    #[error("enumeration box has {cells} cells, above the guard of {guard}")]
    ResourceLimit { cells: String, guard: u128 },

    /// The polytope has no integer point and the requested operation needs one.
    #[error("polytope contains no integer point")]
    NoIntegerPoint,

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A self-check on a construction failed. Signals a bug, not bad input.
    #[error("construction check failed: {0}")]
    ConstructionBug(String),

    #[error("verification exhausted: {0}")]
    VerificationExhausted(String),

    #[error("contract violated: {0}")]
    ContractViolation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::DegenerateConstruction(_)
            | Error::NoIntegerPoint
            | Error::Unsupported(_) => 2,
            Error::ConstructionBug(_)
            | Error::VerificationExhausted(_)
            | Error::ContractViolation(_) => 3,
            Error::ResourceLimit { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
