use super::{coeff_a, coeff_b, BidiskParams, SigmaTable};
use crate::config::TruncationConfig;
use crate::disk::{bergman_norm_sqr, NormExpansion, NormTerm};
use crate::error::{domain, Result};
use crate::poly::{BiPoly, UniPoly, Var};
use crate::specfun::log_gamma;

/// Σ_k coeff(k) ∂^{N−k} ⊘[∂_{z1}^k f].
fn transform_with(f: &BiPoly, n: u32, coeff: impl Fn(u32) -> Result<f64>) -> Result<UniPoly> {
    let mut out = UniPoly::zero();
    for k in 0..=n {
        let restricted = f.differentiate(Var::Z1, k).restrict_diagonal().derivative(n - k);
        out = &out + &restricted.scale(coeff(k)?.into());
    }
    Ok(out)
}

/// Diagonal restriction of (P_N f)/(z1 − z2)^N, where P_N is the orthogonal
/// projection onto functions vanishing to order N along the diagonal.
pub fn restriction_transform(params: &BidiskParams, f: &BiPoly, n: u32) -> Result<UniPoly> {
    params.validate()?;
    transform_with(f, n, |k| coeff_a(params, k, n))
}

/// ‖f‖² = Σ_N σ(α, β, θ+N, ϑ)^{−1} ‖restriction_transform(f, N)‖²_{s+2N}.
pub fn norm_expansion(params: &BidiskParams, f: &BiPoly, cfg: &TruncationConfig) -> Result<NormExpansion> {
    params.validate()?;
    let sigmas = SigmaTable::new(*params, *cfg)?;
    let max_order = f.degree().unwrap_or(0);
    let mut terms = Vec::with_capacity(max_order as usize + 1);
    for n in 0..=max_order {
        let g = restriction_transform(params, f, n)?;
        let norm = bergman_norm_sqr(params.s() + 2.0 * f64::from(n), &g)?;
        terms.push(NormTerm { order: n, value: norm / sigmas.get(n)? });
    }
    Ok(NormExpansion::from_terms(terms))
}

/// Norm expansion of the Hardy space of the bidisk with weight |z1 − z2|^{2θ}
/// on the distinguished boundary.
pub fn hardy_norm_expansion(theta: f64, f: &BiPoly) -> Result<NormExpansion> {
    if !(theta > -0.5) || !theta.is_finite() {
        return domain(format!("Hardy expansion requires theta > -1/2, got {theta}"));
    }
    let max_order = f.degree().unwrap_or(0);
    let mut terms = Vec::with_capacity(max_order as usize + 1);
    for n in 0..=max_order {
        let idx = 2.0 * theta + 2.0 * f64::from(n);
        let log_w = log_gamma(idx + 2.0)? - 2.0 * log_gamma(theta + f64::from(n) + 1.0)?;
        let weight = log_w.exp() / (idx + 1.0);
        let g = transform_with(f, n, |k| coeff_b(theta, k, n))?;
        terms.push(NormTerm { order: n, value: weight * bergman_norm_sqr(idx, &g)? });
    }
    Ok(NormExpansion::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_bipoly;
    use num_complex::Complex64;

    fn poly(s: &str) -> BiPoly {
        parse_bipoly(s).unwrap()
    }

    #[test]
    fn transform_instances() {
        let p = BidiskParams::new(0.4, 1.2, 0.5, 0.3).unwrap();
        assert_eq!(restriction_transform(&p, &BiPoly::one(), 0).unwrap(), UniPoly::constant(1.0.into()));
        let g = restriction_transform(&p, &poly("z1 - z2"), 1).unwrap();
        assert!((g.coeff(0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(g.degree(), Some(0));
        // f = z1 at order 1: a_{0,1} + a_{1,1}
        let g = restriction_transform(&p, &BiPoly::z1(), 1).unwrap();
        assert!((g.coeff(0).re - (1.0 - p.a() / (p.s() + 2.0))).abs() < 1e-15);
    }

    #[test]
    fn norm_of_one_is_inverse_sigma() {
        let p = BidiskParams::new(0.5, 0.25, 1.5, 0.2).unwrap();
        let cfg = TruncationConfig::default();
        let e = norm_expansion(&p, &BiPoly::one(), &cfg).unwrap();
        assert_eq!(e.terms.len(), 1);
        let inv = super::super::inverse_sigma(&p, &cfg).unwrap();
        assert!((e.total - inv).abs() < 1e-14 * inv);
    }

    #[test]
    fn diagonal_difference_lives_in_order_one() {
        let p = BidiskParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let e = norm_expansion(&p, &poly("z1 - z2"), &TruncationConfig::default()).unwrap();
        assert_eq!(e.term(0), 0.0);
        // ‖z1‖² + ‖z2‖² = 1/2 + 1/2
        assert!((e.total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn hardy_instances() {
        assert!((hardy_norm_expansion(0.0, &BiPoly::one()).unwrap().total - 1.0).abs() < 1e-15);
        assert!((hardy_norm_expansion(0.0, &poly("z1 - z2")).unwrap().total - 2.0).abs() < 1e-13);
        assert!((hardy_norm_expansion(1.0, &poly("z1*z2")).unwrap().total - 2.0).abs() < 1e-13);
        assert!(hardy_norm_expansion(-0.5, &BiPoly::one()).is_err());
    }
}
