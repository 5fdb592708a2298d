use thiserror::Error;

use crate::funcspec::ParseError;
use crate::realnum::RealError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Real(#[from] RealError),
    #[error("duplicate node at x = {0}")]
    DuplicateNode(String),
    #[error("empty point list")]
    EmptyInput,
    #[error("{0}")]
    OutOfRange(String),
    #[error("{0}")]
    DomainError(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("no corpus entry named {0:?}")]
    NotFound(String),
    #[error("derivative estimate is exactly zero")]
    DerivativeBreakdown,
    #[error("problem {0:?} has no derivative")]
    MissingDerivative(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
