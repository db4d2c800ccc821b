use thiserror::Error;

/// Errors raised by the engine. Every variant maps onto one of three
/// families (validation, truncation, internal invariant), see [`Error::family`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("incompatible probe frames")]
    IncompatibleFrame,

    #[error("series is not nilpotent: constant term {0} is nonzero")]
    NotNilpotent(String),

    #[error("inexact series division: {0}")]
    Divisibility(String),

    #[error("order undetermined: series vanishes up to truncation degree {0}; raise the truncation")]
    OrderUndetermined(usize),

    #[error("requested degree {requested} exceeds truncation degree {truncation}")]
    Truncation { requested: usize, truncation: usize },

    #[error("unsupported surface: {0}")]
    UnsupportedSurface(String),

    #[error("invalid probe: {0}")]
    InvalidProbe(String),

    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),

    #[error("incompatible classes: {0}")]
    IncompatibleClass(String),

    #[error("unsupported operation: {0}")]
    UnsupportedOperation(String),

    #[error("characteristic violation: {0}")]
    CharacteristicViolation(String),

    #[error("unsupported class: {0}")]
    UnsupportedClass(String),

    #[error("degree bookkeeping: {0}")]
    DegreeBookkeeping(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorFamily {
    Validation,
    Truncation,
    Internal,
}

impl Error {
    pub fn family(&self) -> ErrorFamily {
        match self {
            Error::OrderUndetermined(_) | Error::Truncation { .. } => ErrorFamily::Truncation,
            Error::Divisibility(_) | Error::Invariant(_) | Error::IncompatibleFrame => {
                ErrorFamily::Internal
            }
            _ => ErrorFamily::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
