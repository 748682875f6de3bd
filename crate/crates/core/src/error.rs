use thiserror::Error;

use crate::poly::UniPoly;

/// Errors raised by the evaluators, the oracle and the polynomial layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what}: no convergence after {terms} terms (tail estimate {tail:e})")]
    NonConvergence {
        what: String,
        terms: usize,
        tail: f64,
    },

    #[error("not divisible by (z1 - z2)^{order}; remainder on the diagonal: {remainder}")]
    Divisibility { order: u32, remainder: UniPoly },

    #[error("coefficient index k = {k} exceeds N = {n}")]
    Index { k: u32, n: u32 },

    #[error("Gram block of degree {degree} is ill-conditioned (condition number {condition:e})")]
    Conditioning { degree: usize, condition: f64 },

    #[error("quadrature missed its tolerance: estimated error {error:e} at {entry}")]
    Quadrature { entry: String, error: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
