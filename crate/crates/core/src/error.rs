use thiserror::Error;

/// Errors produced by the LED-ID model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate geometry: transmitter and receiver positions coincide")]
    DegenerateGeometry,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown tag `{0}`")]
    UnknownTag(String),

    /// The scenario document does not match the schema.
    #[error("parse error at `{key}`: {message}")]
    Parse { key: String, message: String },

    /// The scenario document parsed but a value violates a model constraint.
    #[error("validation failed for `{key}`: {constraint}")]
    Validation { key: String, constraint: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
