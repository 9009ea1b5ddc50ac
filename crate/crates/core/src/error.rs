use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A truncated series ran out of terms before its tail dropped below tolerance.
    #[error("series did not converge within {terms} terms (last term magnitude {last_term:e})")]
    NonConvergence { terms: usize, last_term: f64 },

    /// The result is not representable as a finite `f64`.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A time-stepping solve blew past the divergence guard.
    #[error("solution diverged at t = {t}: state norm {norm:e} exceeds {limit:e}")]
    Divergence { t: f64, norm: f64, limit: f64 },

    /// Data handed to an operation violates one of its stated preconditions.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed input: mismatched dimensions, non-finite values and the like.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
