use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation. The message
    /// names the violated bound.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("domain error: {0} is a pole of the gamma function (non-positive integer)")]
    Pole(f64),

    /// The result exceeds the f64 range; the logarithm is still available.
    #[error("result overflows f64 (log value {log_value})")]
    Overflow { log_value: f64 },

    #[error("result underflows f64 (log value {log_value})")]
    Underflow { log_value: f64 },

    #[error("backend {backend} requires a non-negative integer upper argument, got r = {r}")]
    BackendMismatch { backend: String, r: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown property `{0}`")]
    UnknownProperty(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by arguments outside a mathematical domain
    /// (as opposed to malformed input or range problems).
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Pole(_) | Error::BackendMismatch { .. }
        )
    }
}
