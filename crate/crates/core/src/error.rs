use thiserror::Error;

/// Library-wide error type.
///
/// `Precondition` covers every documented domain restriction (points outside
/// the admissible sets, poles of the target function, malformed series
/// arithmetic). `NonConvergence` is reserved for iterative schemes that ran
/// out of budget before certifying their tolerance; callers that surface
/// exit codes map the two variants to distinct codes.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("failed to converge: {0}")]
    NonConvergence(String),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn non_convergence(msg: impl Into<String>) -> Self {
        Error::NonConvergence(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
