use thiserror::Error;

/// Errors raised by the lattice, linear algebra and verification layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} needs {needed} units but the budget is {cap}")]
    Budget {
        what: String,
        needed: u128,
        cap: u128,
    },

    #[error("modular ranks disagree across primes: {0}")]
    Inconsistent(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed: u128, cap: u128) -> Self {
        Error::Budget {
            what: what.into(),
            needed,
            cap,
        }
    }

    /// True for resource-limit errors, which the verifier reports as skipped rather than failed.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
