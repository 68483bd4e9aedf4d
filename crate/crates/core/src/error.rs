use thiserror::Error;

/// Errors raised by the model, pricing and special-function routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An index or time argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model or function parameter violating its constraints.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A rate that does not sit on the model's state grid.
    #[error("rate {rate} is not on the grid (nearest state {nearest_state}, rate {nearest_rate})")]
    OffGrid {
        rate: f64,
        nearest_state: u32,
        nearest_rate: f64,
    },

    /// The requested computation exceeds a configured size limit.
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// The model is not of the kind required by the operation.
    #[error("model error: {0}")]
    Model(String),

    /// A truncated series produced a value that cannot be used.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
