use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("{objective} is not differentiable at the requested point")]
    NonDifferentiable { objective: String },

    #[error("path diverged to a non-finite state at step {step}")]
    Divergence { step: usize },

    #[error("degenerate annealing schedule: {0}")]
    DegenerateSchedule(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
