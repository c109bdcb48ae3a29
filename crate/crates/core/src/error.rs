use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// The requested point lies where a truncated series carries no tail control.
    #[error("truncated series cannot be evaluated at |z| = {modulus}")]
    TruncationUnreliable { modulus: f64 },

    /// An adaptive rule ran out of refinements. `previous` and `last` are the
    /// final two estimates; `last` doubles as the partial value.
    #[error("{what} did not converge (previous estimate {previous:e}, last estimate {last:e})")]
    NonConvergence {
        what: &'static str,
        previous: f64,
        last: f64,
    },

    /// The neglected part of a Hankel coefficient sum could not be bounded below tolerance.
    #[error("coefficient action tail bound {bound:e} exceeds tolerance {tolerance:e}")]
    CoefficientTail { bound: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
