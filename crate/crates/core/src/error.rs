use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine stopped before reaching its tolerance.
    #[error("numerical accuracy not reached: {what} (achieved {achieved:e}, wanted {wanted:e})")]
    Accuracy {
        what: &'static str,
        achieved: f64,
        wanted: f64,
    },

    /// The requested loss level cannot be exceeded by the portfolio.
    #[error("loss level unattainable: threshold {threshold} >= total exposure {total}")]
    LossUnattainable { threshold: f64, total: f64 },

    /// Simulation finished without producing a usable estimate.
    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
