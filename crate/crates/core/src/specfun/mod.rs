//! Special functions: log-Gamma, Pochhammer symbols, Gauss and generalized
//! hypergeometric series, and the entire function `E_θ(x) = Σ xᴺ / Γ(θ+N+1)`.
//!
//! Every infinite series returns a [`SeriesResult`] carrying the number of
//! terms summed and an estimate of the truncation error.

mod asymptotic;
pub(crate) mod dd;
mod hyp;
mod mittag;
pub(crate) mod scaled;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use hyp::{hyp2f1, hyp3f2_unit};
pub use mittag::mittag_e;

/// Value of a truncated series together with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: Complex64,
    pub terms_used: usize,
    /// Estimated absolute truncation error; never negative.
    pub tail_bound: f64,
}

impl SeriesResult {
    pub(crate) fn real(value: f64, terms_used: usize, tail_bound: f64) -> Self {
        Self {
            value: Complex64::new(value, 0.0),
            terms_used,
            tail_bound: tail_bound.max(0.0),
        }
    }
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma requires a positive finite argument, got {x}"));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}

/// `(ln |Γ(x)|, sign Γ(x))` for any real x that is not a pole.
pub(crate) fn log_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return Ok((log_gamma(x)?, 1.0));
    }
    if x == x.floor() {
        return domain(format!("Γ has a pole at {x}"));
    }
    // Γ(x) Γ(1-x) = π / sin(πx)
    let s = (std::f64::consts::PI * x).sin();
    let ln = std::f64::consts::PI.ln() - s.abs().ln() - log_gamma(1.0 - x)?;
    Ok((ln, s.signum()))
}

/// Rising factorial (x)_n = x(x+1)⋯(x+n−1); the empty product is 1.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    if n <= 30 {
        return (0..n).fold(1.0, |acc, j| acc * (x + f64::from(j)));
    }
    // a factor hits zero exactly when x is a non-positive integer with -x < n
    if x <= 0.0 && x == x.floor() && -x < f64::from(n) {
        return 0.0;
    }
    match (log_gamma_signed(x + f64::from(n)), log_gamma_signed(x)) {
        (Ok((ln_top, s_top)), Ok((ln_bot, s_bot))) => s_top * s_bot * (ln_top - ln_bot).exp(),
        _ => (0..n).fold(1.0, |acc, j| acc * (x + f64::from(j))),
    }
}

/// `n!` as a float.
pub fn factorial(n: u32) -> f64 {
    pochhammer(1.0, n)
}

/// Binomial coefficient `C(n, k)` as a float; zero when k > n.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}
