//! Single comparisons between a computed value and a reference, with the
//! tolerance each one is judged against.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::specfun::SeriesResult;

/// How a check's error is measured against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// |value − oracle|
    Absolute,
    /// |value − oracle| / max(|oracle|, floor)
    Relative,
    /// the value itself must not exceed the tolerance
    Bound,
    /// reported without a reference; always passes
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub item: String,
    pub value: Complex64,
    pub oracle: Option<Complex64>,
    pub abs_err: f64,
    pub rel_err: f64,
    pub metric: Metric,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub terms_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tail_bound: Option<f64>,
    pub pass: bool,
}

fn rel(abs: f64, scale: f64) -> f64 {
    if abs == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        abs / scale
    }
}

impl Check {
    fn build(item: impl Into<String>, value: Complex64, oracle: Option<Complex64>, abs_err: f64, rel_err: f64, metric: Metric, tolerance: f64) -> Self {
        let err = match metric {
            Metric::Absolute => abs_err,
            Metric::Relative | Metric::Bound => rel_err,
            Metric::Unchecked => 0.0,
        };
        Self {
            item: item.into(),
            value,
            oracle,
            abs_err,
            rel_err,
            metric,
            tolerance,
            terms_used: None,
            tail_bound: None,
            // NaN never passes
            pass: err <= tolerance,
        }
    }

    pub fn relative(item: impl Into<String>, value: impl Into<Complex64>, oracle: impl Into<Complex64>, tolerance: f64) -> Self {
        Self::relative_floor(item, value, oracle, 0.0, tolerance)
    }

    /// Relative error with the denominator floored at `floor`, for entries
    /// that vanish structurally.
    pub fn relative_floor(
        item: impl Into<String>,
        value: impl Into<Complex64>,
        oracle: impl Into<Complex64>,
        floor: f64,
        tolerance: f64,
    ) -> Self {
        let (v, o) = (value.into(), oracle.into());
        let abs = (v - o).norm();
        Self::build(item, v, Some(o), abs, rel(abs, o.norm().max(floor)), Metric::Relative, tolerance)
    }

    pub fn absolute(item: impl Into<String>, value: impl Into<Complex64>, oracle: impl Into<Complex64>, tolerance: f64) -> Self {
        let (v, o) = (value.into(), oracle.into());
        let abs = (v - o).norm();
        Self::build(item, v, Some(o), abs, rel(abs, o.norm()), Metric::Absolute, tolerance)
    }

    /// A nonnegative defect that must stay below `tolerance`.
    pub fn bound(item: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::build(item, Complex64::new(value, 0.0), None, value, value, Metric::Bound, tolerance)
    }

    /// A computed value with nothing to compare against. Its errors are NaN.
    pub fn value(item: impl Into<String>, value: impl Into<Complex64>) -> Self {
        Self::build(item, value.into(), None, f64::NAN, f64::NAN, Metric::Unchecked, f64::INFINITY)
    }

    pub fn with_series(mut self, r: &SeriesResult) -> Self {
        self.terms_used = Some(r.terms_used);
        self.tail_bound = Some(r.tail_bound);
        self
    }

    /// The error the verdict is based on.
    pub fn error(&self) -> f64 {
        match self.metric {
            Metric::Absolute => self.abs_err,
            Metric::Relative | Metric::Bound => self.rel_err,
            Metric::Unchecked => 0.0,
        }
    }
}
