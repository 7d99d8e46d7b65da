use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Non-finite input or an argument outside the declared domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Evaluation point too close to a root of a declared denominator.
    #[error("pole: x = {x} lies within {radius} of denominator root {root}")]
    Pole { x: f64, root: f64, radius: f64 },

    #[error("invalid parameters for {family}: violated {inequality}")]
    InvalidParameters { family: String, inequality: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
