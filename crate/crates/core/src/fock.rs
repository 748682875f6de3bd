//! Gaussian-weighted (Bargmann–Fock type) spaces of entire functions on C^2
//! with weight |z1 − z2|^{2θ} e^{−α|z1|² − β|z2|²} dA(z1) dA(z2).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{SmallTermRun, TruncationConfig};
use crate::disk::{fock_norm_sqr, NormExpansion, NormTerm};
use crate::error::{domain, Error, Result};
use crate::point::Point2;
use crate::poly::{BiPoly, UniPoly, Var};
use crate::specfun::dd::{CDd, Dd};
use crate::specfun::{binomial, factorial, log_gamma, mittag_e, SeriesResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

impl FockParams {
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        let p = Self { alpha, beta, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 0.0) || !v.is_finite() {
                return domain(format!("{name} must be a finite positive number, got {v}"));
            }
        }
        if !(self.theta > -1.0) || !self.theta.is_finite() {
            return domain(format!("theta must be a finite number > -1, got {}", self.theta));
        }
        Ok(())
    }

    /// γ = α + β, the parameter of the one-variable restriction space.
    pub fn gamma(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn integer_theta(&self) -> Option<u32> {
        (self.theta >= 0.0 && self.theta.fract() == 0.0 && self.theta <= 64.0).then_some(self.theta as u32)
    }
}

fn log_prefactor(p: &FockParams) -> f64 {
    // (αβ)^{θ+1} / (α+β)^θ
    (p.theta + 1.0) * (p.alpha * p.beta).ln() - p.theta * p.gamma().ln()
}

/// σ = (αβ)^{θ+1} / ((α+β)^θ Γ(θ+1)).
pub fn fock_sigma(params: &FockParams) -> Result<f64> {
    params.validate()?;
    Ok((log_prefactor(params) - log_gamma(params.theta + 1.0)?).exp())
}

/// σ e^{α w̄1 z1 + β w̄1 z2}.
pub fn fock_diag_kernel(params: &FockParams, z: &Point2, w1: Complex64) -> Result<Complex64> {
    let wc = w1.conj();
    Ok(fock_sigma(params)? * (wc * (z.z1 * params.alpha + z.z2 * params.beta)).exp())
}

fn mixed_exponent(p: &FockParams, z: &Point2, w: &Point2) -> Complex64 {
    (w.z1.conj() * p.alpha + w.z2.conj() * p.beta) * (z.z1 * p.alpha + z.z2 * p.beta) / p.gamma()
}

/// Kernel of the functions that do not vanish on the diagonal summand:
/// σ e^{(αw̄1+βw̄2)(αz1+βz2)/(α+β)}.
pub fn fock_q0_kernel(params: &FockParams, z: &Point2, w: &Point2) -> Result<Complex64> {
    Ok(fock_sigma(params)? * mixed_exponent(params, z, w).exp())
}

/// Full kernel (αβ)^{θ+1}/(α+β)^θ · e^{…} · E_θ(αβ (z1−z2)(w̄1−w̄2)/(α+β)).
pub fn fock_full_kernel(params: &FockParams, z: &Point2, w: &Point2, cfg: &TruncationConfig) -> Result<SeriesResult> {
    params.validate()?;
    let x = z.diag_gap() * w.diag_gap().conj() * (params.alpha * params.beta / params.gamma());
    let e = mittag_e(params.theta, x, cfg)?;
    let pref = (mixed_exponent(params, z, w) + log_prefactor(params)).exp();
    Ok(SeriesResult { value: pref * e.value, terms_used: e.terms_used, tail_bound: pref.norm() * e.tail_bound })
}

/// Full kernel through the change of variables z1 = u1 + βu2, z2 = u1 − αu2,
/// in which the space splits into a Fock space of parameter α+β in u1 and a
/// radially weighted Fock space in u2, summed here as its own power series.
pub fn fock_cov_kernel(params: &FockParams, z: &Point2, w: &Point2, cfg: &TruncationConfig) -> Result<SeriesResult> {
    params.validate()?;
    let FockParams { alpha, beta, theta } = *params;
    let gamma = alpha + beta;
    let to_u = |p: &Point2| ((p.z1 * alpha + p.z2 * beta) / gamma, (p.z1 - p.z2) / gamma);
    let (u1, u2) = to_u(z);
    let (v1, v2) = to_u(w);
    let delta = alpha * beta * gamma;

    // first factor: Fock kernel γ e^{γ u1 v̄1}
    let first = (u1 * v1.conj() * gamma).exp() * gamma;

    // second factor: Σ_n δ^{θ+n+1}/Γ(θ+n+1) (u2 v̄2)^n
    let y = u2 * v2.conj() * delta;
    let lead = ((theta + 1.0) * delta.ln() - log_gamma(theta + 1.0)?).exp();
    let yd = CDd::from_c64(y);
    let mut term = CDd::from_c64(Complex64::new(1.0, 0.0));
    let mut sum = term;
    let mut run = SmallTermRun::new(cfg);
    let r = y.norm();
    let mut second = None;
    for n in 0..cfg.max_terms {
        let denom = Dd::new(theta).add(Dd::new(n as f64 + 1.0));
        term = term.mul(yd).div_real(denom);
        sum = sum.add(term);
        let (t, s) = (term.norm(), sum.norm());
        let small = run.observe(t, s, cfg.tolerance);
        let q = r / (theta + n as f64 + 2.0);
        if t == 0.0 || (small && q < 1.0 && t * q / (1.0 - q) <= cfg.tolerance * s.max(1.0)) {
            let tail = if t == 0.0 { 0.0 } else { t * q / (1.0 - q) };
            second = Some((sum.to_c64() * lead, n + 2, tail * lead));
            break;
        }
    }
    let Some((second, terms, tail)) = second else {
        return Err(Error::NonConvergence { what: "weighted Fock kernel series".into(), terms: cfg.max_terms, tail: f64::NAN });
    };
    // pulling the kernel back to (z1, z2) divides by the Jacobian (α+β)^2 of
    // dA(u1) dA(u2) ↦ dA(z1) dA(z2) and accounts for |z1 − z2|^{2θ} = (α+β)^{2θ}|u2|^{2θ}
    let jac = gamma.powf(-(2.0 * theta + 2.0));
    let value = first * second * jac;
    Ok(SeriesResult { value, terms_used: terms, tail_bound: (first * jac).norm() * tail })
}

/// c_{k,N} = (−1)^{N−k} C(N,k) (α/(α+β))^{N−k}.
pub fn coeff_c(params: &FockParams, k: u32, n: u32) -> Result<f64> {
    params.validate()?;
    if k > n {
        return Err(Error::Index { k, n });
    }
    let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * binomial(n, k) * (params.alpha / params.gamma()).powi((n - k) as i32))
}

/// Σ_{k=n}^{N} c_{k,N} C(k,n) (β/(α+β))^{k−n}, which equals δ_{nN}.
pub fn fock_delta_sum(params: &FockParams, n: u32, big_n: u32) -> Result<f64> {
    if n > big_n {
        return Err(Error::Index { k: n, n: big_n });
    }
    let r = params.alpha / params.gamma();
    let mut sum = 0.0;
    for k in n..=big_n {
        sum += coeff_c(params, k, big_n)? * binomial(k, n) * r.powi((k - n) as i32);
    }
    Ok(sum)
}

/// (1/N!) Σ_k c_{k,N} ∂^{N−k} ⊘[∂_{z1}^k f].
pub fn fock_restriction_transform(params: &FockParams, f: &BiPoly, n: u32) -> Result<UniPoly> {
    params.validate()?;
    let mut out = UniPoly::zero();
    for k in 0..=n {
        let restricted = f.differentiate(Var::Z1, k).restrict_diagonal().derivative(n - k);
        out = &out + &restricted.scale((coeff_c(params, k, n)? / factorial(n)).into());
    }
    Ok(out)
}

/// ‖f‖² = Σ_N (α+β)^{θ+N+1} Γ(θ+N+1) / (αβ)^{θ+N+1} · ‖N!·transform_N‖²/(N!)².
pub fn fock_norm_expansion(params: &FockParams, f: &BiPoly) -> Result<NormExpansion> {
    params.validate()?;
    let FockParams { alpha, beta, theta } = *params;
    let gamma = params.gamma();
    let max_order = f.degree().unwrap_or(0);
    let mut terms = Vec::with_capacity(max_order as usize + 1);
    for n in 0..=max_order {
        let e = theta + f64::from(n) + 1.0;
        let weight = (e * gamma.ln() + log_gamma(e)? - e * (alpha * beta).ln()).exp();
        // the transform already carries the 1/N! of the weight
        let g = fock_restriction_transform(params, f, n)?;
        terms.push(NormTerm { order: n, value: weight * fock_norm_sqr(gamma, &g)? });
    }
    Ok(NormExpansion::from_terms(terms))
}

/// Fock space with fixed parameters and truncation policy.
#[derive(Debug, Clone)]
pub struct FockSpace {
    pub params: FockParams,
    pub cfg: TruncationConfig,
}

impl FockSpace {
    pub fn new(params: FockParams, cfg: TruncationConfig) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, cfg })
    }

    pub fn full_kernel(&self, z: &Point2, w: &Point2) -> Result<SeriesResult> {
        fock_full_kernel(&self.params, z, w, &self.cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_bipoly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(a: f64, b: f64, t: f64) -> FockParams {
        FockParams::new(a, b, t).unwrap()
    }

    #[test]
    fn sigma_values() {
        assert!((fock_sigma(&params(1.0, 1.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((fock_sigma(&params(0.7, 2.5, 0.0)).unwrap() - 1.75).abs() < 1e-14);
        assert!((fock_sigma(&params(1.0, 1.0, 1.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!(FockParams::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn q0_instances() {
        let p = params(1.0, 1.0, 1.0);
        let v = fock_q0_kernel(&p, &Point2::real(1.0, 0.0), &Point2::real(0.0, 1.0)).unwrap();
        assert!((v - c(0.5f64.exp() / 2.0, 0.0)).norm() < 1e-15);
        let p = params(0.6, 1.3, 0.4);
        let z = Point2::new(c(0.3, 1.0), c(-0.7, 0.2));
        let lam = c(0.5, -0.4);
        let a = fock_q0_kernel(&p, &z, &Point2::new(lam, lam)).unwrap();
        let b = fock_diag_kernel(&p, &z, lam).unwrap();
        assert!((a - b).norm() < 1e-14 * b.norm());
    }

    #[test]
    fn product_case() {
        let cfg = TruncationConfig::default();
        let p = params(0.8, 1.7, 0.0);
        let z = Point2::new(c(0.5, -1.0), c(1.2, 0.3));
        let w = Point2::new(c(-0.6, 0.4), c(0.9, 1.1));
        let expected = (z.z1 * w.z1.conj() * 0.8 + z.z2 * w.z2.conj() * 1.7).exp() * (0.8 * 1.7);
        for v in [fock_full_kernel(&p, &z, &w, &cfg).unwrap(), fock_cov_kernel(&p, &z, &w, &cfg).unwrap()] {
            assert!((v.value - expected).norm() < 1e-13 * expected.norm(), "{} vs {expected}", v.value);
        }
    }

    #[test]
    fn full_kernel_on_diagonal() {
        let cfg = TruncationConfig::default();
        let p = params(1.0, 1.0, 1.0);
        let z = Point2::new(c(1.0, 0.0), c(0.0, 1.0));
        let w1 = c(0.5, 0.0);
        let a = fock_full_kernel(&p, &z, &Point2::new(w1, w1), &cfg).unwrap().value;
        let b = fock_diag_kernel(&p, &z, w1).unwrap();
        assert!((a - b).norm() < 1e-14 * b.norm());
    }

    #[test]
    fn cov_kernel_matches_full_kernel() {
        let cfg = TruncationConfig::default();
        for theta in [0.5, 1.0, 2.5, -0.4] {
            let p = params(0.9, 1.6, theta);
            let z = Point2::new(c(1.5, -0.3), c(-1.2, 0.8));
            let w = Point2::new(c(-1.1, 1.4), c(0.7, -1.9));
            let a = fock_full_kernel(&p, &z, &w, &cfg).unwrap().value;
            let b = fock_cov_kernel(&p, &z, &w, &cfg).unwrap().value;
            assert!((a - b).norm() < 1e-12 * a.norm(), "θ={theta}: {a} vs {b}");
        }
        let p = params(1.3, 0.4, 1.5);
        let o = Point2::origin();
        let s = fock_sigma(&p).unwrap();
        assert!((fock_cov_kernel(&p, &o, &o, &cfg).unwrap().value - c(s, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn coefficient_identities() {
        let p = params(1.0, 1.0, 0.0);
        assert_eq!(coeff_c(&p, 3, 3).unwrap(), 1.0);
        assert_eq!(coeff_c(&p, 0, 1).unwrap(), -0.5);
        assert!(coeff_c(&p, 2, 1).is_err());
        let p = params(0.3, 2.2, 0.7);
        for big_n in 0..=10 {
            for n in 0..=big_n {
                let expected = if n == big_n { 1.0 } else { 0.0 };
                assert!((fock_delta_sum(&p, n, big_n).unwrap() - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn transform_instances() {
        let p = params(1.0, 2.0, 0.5);
        assert_eq!(fock_restriction_transform(&p, &BiPoly::one(), 0).unwrap(), UniPoly::constant(1.0.into()));
        let g = fock_restriction_transform(&p, &parse_bipoly("z1 - z2").unwrap(), 1).unwrap();
        assert_eq!(g, UniPoly::constant(1.0.into()));
        let g = fock_restriction_transform(&p, &BiPoly::z1(), 0).unwrap();
        assert_eq!(g, UniPoly::from_terms([(1, 1.0.into())]));
    }

    #[test]
    fn expansion_instances() {
        let e = fock_norm_expansion(&params(1.0, 1.0, 0.0), &BiPoly::one()).unwrap();
        assert!((e.total - 1.0).abs() < 1e-15);
        let e = fock_norm_expansion(&params(1.0, 1.0, 0.0), &parse_bipoly("z1 - z2").unwrap()).unwrap();
        assert!((e.total - 2.0).abs() < 1e-14);
    }
}
