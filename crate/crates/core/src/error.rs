use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Argument outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Result magnitude not representable as an `f64`.
    #[error("overflow: {0}")]
    Overflow(String),

    /// An iterative or adaptive procedure did not reach its tolerance.
    #[error("{what} did not converge (achieved {achieved:e})")]
    Convergence { what: String, achieved: f64 },

    /// Invalid problem definition.
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn overflow(msg: impl Into<String>) -> Self {
        Error::Overflow(msg.into())
    }

    pub(crate) fn convergence(what: impl Into<String>, achieved: f64) -> Self {
        Error::Convergence {
            what: what.into(),
            achieved,
        }
    }
}
