use serde::{Deserialize, Serialize};

/// Environment variable that overrides [`TruncationConfig::max_terms`].
pub const MAX_TERMS_ENV: &str = "KERNELFORGE_MAX_TERMS";

/// Truncation policy shared by every infinite series in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationConfig {
    /// Target truncation error, relative to `max(1, |partial sum|)`.
    pub tolerance: f64,
    /// Cap on the number of terms of any single series.
    pub max_terms: usize,
    /// A series stops only after this many consecutive negligible terms.
    pub consecutive_small: usize,
    /// Cap on the outer index of double series (vanishing order along the diagonal).
    pub max_outer_terms: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_terms: 100_000,
            consecutive_small: 3,
            max_outer_terms: 2_000,
        }
    }
}

impl TruncationConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    /// Applies `KERNELFORGE_MAX_TERMS` when it is set to a positive integer.
    pub fn with_env_overrides(mut self) -> Self {
        if let Some(cap) = std::env::var(MAX_TERMS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
        {
            self.max_terms = cap;
        }
        self
    }
}

/// Controls for the numeric Gram oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Requested absolute accuracy of every Gram entry (entries are O(1)).
    pub tolerance: f64,
    /// Maximum number of interval bisections per one-dimensional integral.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_subdivisions: 400,
        }
    }
}

/// Counts consecutive negligible terms for the stopping rule of every series.
#[derive(Debug)]
pub(crate) struct SmallTermRun {
    needed: usize,
    run: usize,
}

impl SmallTermRun {
    pub(crate) fn new(cfg: &TruncationConfig) -> Self {
        Self {
            needed: cfg.consecutive_small.max(1),
            run: 0,
        }
    }

    /// Records one term; returns true once enough consecutive terms were small.
    pub(crate) fn observe(&mut self, term_abs: f64, sum_abs: f64, tolerance: f64) -> bool {
        if term_abs <= tolerance * sum_abs.max(1.0) {
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.run >= self.needed
    }
}
