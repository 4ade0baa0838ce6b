use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A malformed or invariant-violating instance file.
    #[error("format error in {field}: {message}")]
    Format { field: String, message: String },

    /// An experiment setting that is missing, contradictory or out of range.
    #[error("invalid configuration, {field}: {message}")]
    Config { field: String, message: String },

    #[error("secular function evaluated at the pole E = {energy}")]
    PoleEvaluation { energy: f64 },

    #[error("μ = {mu} is outside the domain of the closed-form model")]
    OutOfDomain { mu: f64 },

    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("target probability not reached below Γ = {cap}; best Γ = {best_gamma} reached P = {best_probability}")]
    CapExceeded {
        cap: f64,
        best_gamma: f64,
        best_probability: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            message: message.into(),
        }
    }
}
