use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    /// A metric coefficient that must be positive is not (Kähler positivity fails).
    #[error("{quantity} = {value} is not positive at R = {radius}")]
    NotPositive {
        quantity: &'static str,
        value: f64,
        radius: f64,
    },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid initial radius: {0}")]
    InvalidInitialRadius(String),

    #[error("mean curvature is non-negative at R = {radius} (H = {mean_curvature})")]
    StallDetected { radius: f64, mean_curvature: f64 },

    #[error("trajectory did not collapse")]
    NotCollapsed,

    #[error("{0} is out of range")]
    OutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Process exit code: 1 for mathematical failures, 2 for usage, parse and domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotPositive { .. }
            | Error::InvalidPotential(_)
            | Error::StallDetected { .. }
            | Error::NotCollapsed => 1,
            _ => 2,
        }
    }
}
