use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polarization {0} outside [-1, 1]")]
    InvalidPolarization(f64),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    InvalidSubsystem { index: usize, count: usize },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("eigenvalue 1 has multiplicity {0}; fixed point is not unique")]
    NonUniqueFixedPoint(usize),

    #[error("fixed point iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("division by zero in `{0}`")]
    DivisionDomain(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }

    /// Short variant name, used for process exit reporting.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidPolarization(_) => "InvalidPolarization",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::InvalidState(_) => "InvalidState",
            Error::InvalidSubsystem { .. } => "InvalidSubsystem",
            Error::InvalidChannel(_) => "InvalidChannel",
            Error::NonUniqueFixedPoint(_) => "NonUniqueFixedPoint",
            Error::NoConvergence(_) => "NoConvergence",
            Error::DivisionDomain(_) => "DivisionDomain",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
        }
    }
}
