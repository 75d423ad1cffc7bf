use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("invalid input at {pointer}: {message}")]
    Invalid { pointer: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("{job} failed: {source}")]
    Compute {
        job: &'static str,
        #[source]
        source: eqstack::error::Error,
    },
}

impl CliError {
    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// Attaches a validation failure to the JSON object it came from. Core
    /// errors that name a relative path get it appended.
    pub fn invalid(base: &str, source: eqstack::error::Error) -> Self {
        let (pointer, message) = match source {
            eqstack::error::Error::InvariantViolation { location, message }
                if !location.is_empty() && !location.contains(char::is_whitespace) =>
            {
                (format!("{base}/{location}"), message)
            }
            eqstack::error::Error::InvariantViolation { location, message } if !location.is_empty() => {
                (base.to_string(), format!("{location}: {message}"))
            }
            eqstack::error::Error::InvariantViolation { message, .. } => (base.to_string(), message),
            other => (base.to_string(), other.to_string()),
        };
        let pointer = if pointer.is_empty() { "/".to_string() } else { pointer };
        CliError::Invalid { pointer, message }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
