//! One-variable spaces carrying the diagonal restrictions: the weighted
//! Bergman spaces of the unit disc (normalized measure) and the Fock spaces
//! of the plane.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::poly::UniPoly;

/// ‖z^m‖² in the Bergman space of the disc with weight (s+1)(1−|z|²)^s dA.
///
/// Equals m!/(s+2)_m; evaluated as a product of ratios so that large m
/// neither overflows nor loses precision.
pub fn bergman_monomial_norm_sqr(s: f64, m: u32) -> f64 {
    (1..=m).map(|j| f64::from(j) / (s + 1.0 + f64::from(j))).product()
}

pub fn bergman_norm_sqr(s: f64, g: &UniPoly) -> Result<f64> {
    if !(s > -1.0) {
        return domain(format!("Bergman index must exceed -1, got {s}"));
    }
    Ok(g.weighted_norm_sqr(|m| bergman_monomial_norm_sqr(s, m)))
}

/// ‖z^n‖² = n!/γ^{n+1} for the weight e^{−γ|z|²} dA.
pub fn fock_monomial_norm_sqr(gamma: f64, n: u32) -> f64 {
    (1..=n).map(|j| f64::from(j) / gamma).product::<f64>() / gamma
}

pub fn fock_norm_sqr(gamma: f64, g: &UniPoly) -> Result<f64> {
    if !(gamma > 0.0) {
        return domain(format!("Fock parameter must be positive, got {gamma}"));
    }
    Ok(g.weighted_norm_sqr(|n| fock_monomial_norm_sqr(gamma, n)))
}

/// One summand of a norm expansion, indexed by the order of vanishing along
/// the variety.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormTerm {
    pub order: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormExpansion {
    pub terms: Vec<NormTerm>,
    pub total: f64,
}

impl NormExpansion {
    pub(crate) fn from_terms(terms: Vec<NormTerm>) -> Self {
        let total = terms.iter().map(|t| t.value).sum();
        Self { terms, total }
    }

    /// Value of the term of the given order (zero when absent).
    pub fn term(&self, order: u32) -> f64 {
        self.terms.iter().find(|t| t.order == order).map_or(0.0, |t| t.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{factorial, pochhammer};
    use num_complex::Complex64;

    #[test]
    fn bergman_norms_match_pochhammer_form() {
        for &s in &[-0.5, 0.0, 1.3, 7.0] {
            for m in 0..25 {
                let expected = factorial(m) / pochhammer(s + 2.0, m);
                assert!((bergman_monomial_norm_sqr(s, m) / expected - 1.0).abs() < 1e-13);
            }
        }
        assert_eq!(bergman_monomial_norm_sqr(0.0, 1), 0.5);
    }

    #[test]
    fn fock_norms() {
        assert_eq!(fock_monomial_norm_sqr(1.0, 4), 24.0);
        assert_eq!(fock_monomial_norm_sqr(2.0, 0), 0.5);
        let g = UniPoly::from_terms([(0, Complex64::new(1.0, 0.0)), (1, Complex64::new(0.0, 2.0))]);
        assert!((fock_norm_sqr(2.0, &g).unwrap() - (0.5 + 4.0 * 0.25)).abs() < 1e-15);
        assert!(fock_norm_sqr(0.0, &g).is_err());
    }
}
