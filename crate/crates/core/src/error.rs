use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("{what} = {value} is outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    #[error("quadrature did not reach tolerance {tol:e} within {evaluations} evaluations")]
    Quadrature { tol: f64, evaluations: usize },

    #[error("naive construction is capped at {cap} vertices (got {n})")]
    CapExceeded { n: usize, cap: usize },

    #[error("power-law fit needs at least {needed} non-empty bins in range, found {found}")]
    InsufficientBins { needed: usize, found: usize },

    #[error("{0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: impl Into<String>) -> Self {
        Error::Domain {
            what,
            value,
            domain: domain.into(),
        }
    }
}
