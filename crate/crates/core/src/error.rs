use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The instance violates the hypothesis a formula was proven under.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// The requested work exceeds the configured budget.
    #[error("resource limit: {what} needs {needed}, budget is {budget}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// The instance has a trivial answer (zero partitions) that cannot be
    /// expressed in the requested form, e.g. the logarithm of zero.
    #[error("degenerate instance: {0}")]
    Degenerate(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the error category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Hypothesis(_) => "hypothesis",
            Error::ResourceLimit { .. } => "resource_limit",
            Error::NoConvergence(_) => "no_convergence",
            Error::Degenerate(_) => "degenerate",
            Error::Cache(_) => "cache",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
