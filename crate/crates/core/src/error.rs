use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid triangle angles: {0}")]
    InvalidAngles(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("general position violated: {0}")]
    GeneralPosition(String),

    #[error("point set has not been validated for general position")]
    NotValidated,

    #[error("perturbation failed to reach general position after {0} attempts")]
    PerturbationFailed(usize),

    #[error("graph integrity: {0}")]
    GraphIntegrity(String),

    #[error("wrong routing case: {0}")]
    WrongCase(String),

    #[error("route verification failed at step {step}: {reason}")]
    Verification { step: usize, reason: String },

    #[error("route exceeded the step limit of {0}")]
    StepLimit(usize),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
}
