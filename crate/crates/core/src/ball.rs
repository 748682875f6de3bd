//! Weighted Bergman spaces on the unit ball of C^2, expanded along the
//! variety {z2 = 0}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{SmallTermRun, TruncationConfig};
use crate::disk::{bergman_norm_sqr, NormExpansion, NormTerm};
use crate::error::{domain, Error, Result};
use crate::point::Point2;
use crate::poly::{BiPoly, Var};
use crate::specfun::{factorial, hyp2f1, log_gamma, SeriesResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

impl BallParams {
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        let p = Self { alpha, beta, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("theta", self.theta)] {
            if !(v > -1.0) || !v.is_finite() {
                return domain(format!("{name} must be a finite number > -1, got {v}"));
            }
        }
        Ok(())
    }

    /// Index α + β + θ + N + 1 of the restriction space for order N.
    pub fn restriction_index(&self, n: u32) -> f64 {
        self.alpha + self.beta + self.theta + f64::from(n) + 1.0
    }
}

fn check_point(z: &Point2) -> Result<()> {
    if !z.in_ball() {
        let r2 = z.z1.norm_sqr() + z.z2.norm_sqr();
        return domain(format!("point ({}, {}) lies outside the open unit ball (|z|^2 = {r2:.6})", z.z1, z.z2));
    }
    Ok(())
}

fn log_embed_const(p: &BallParams, n: u32) -> Result<f64> {
    let nf = f64::from(n);
    Ok(log_gamma(p.alpha + 1.0)? + log_gamma(p.theta + nf + 1.0)?
        - (p.alpha + p.beta + p.theta + nf + 2.0).ln()
        - log_gamma(p.alpha + p.theta + nf + 2.0)?)
}

/// Γ(α+1)Γ(θ+N+1) / ((α+β+θ+N+2) Γ(α+θ+N+2)): ‖z2^N g(z1)‖² = embed_const(N)·‖g‖²
/// with the one-variable norm of index α+β+θ+N+1.
pub fn embed_const(params: &BallParams, n: u32) -> Result<f64> {
    params.validate()?;
    Ok(log_embed_const(params, n)?.exp())
}

/// ‖f‖² = Σ_N embed_const(N)/(N!)² ‖∂_{z2}^N f(·, 0)‖².
pub fn ball_norm_expansion(params: &BallParams, f: &BiPoly) -> Result<NormExpansion> {
    params.validate()?;
    let max_order = f.degree_in(Var::Z2).unwrap_or(0);
    let mut terms = Vec::with_capacity(max_order as usize + 1);
    for n in 0..=max_order {
        let g = f.differentiate(Var::Z2, n).restrict_z2_zero();
        let weight = embed_const(params, n)? / factorial(n).powi(2);
        terms.push(NormTerm { order: n, value: weight * bergman_norm_sqr(params.restriction_index(n), &g)? });
    }
    Ok(NormExpansion::from_terms(terms))
}

/// Norm expansion of the weighted Hardy space on the sphere, the limit of
/// (α+1)(α+2)‖f‖²_{α,β,θ} as α → −1.
pub fn ball_hardy_norm_expansion(beta: f64, theta: f64, f: &BiPoly) -> Result<NormExpansion> {
    if !(beta + theta > -1.0) || !beta.is_finite() || !theta.is_finite() {
        return domain(format!("Hardy expansion on the sphere requires beta + theta > -1, got {}", beta + theta));
    }
    let max_order = f.degree_in(Var::Z2).unwrap_or(0);
    let mut terms = Vec::with_capacity(max_order as usize + 1);
    for n in 0..=max_order {
        let idx = beta + theta + f64::from(n);
        let g = f.differentiate(Var::Z2, n).restrict_z2_zero();
        let weight = 1.0 / ((idx + 1.0) * factorial(n).powi(2));
        terms.push(NormTerm { order: n, value: weight * bergman_norm_sqr(idx, &g)? });
    }
    Ok(NormExpansion::from_terms(terms))
}

/// Kernel of the summand of functions z2^N g(z1):
/// (z2 w̄2)^N / (embed_const(N) (1 − z1 w̄1)^{α+β+θ+N+3}).
pub fn ball_qn_kernel(params: &BallParams, n: u32, z: &Point2, w: &Point2) -> Result<Complex64> {
    params.validate()?;
    check_point(z)?;
    check_point(w)?;
    let base = Complex64::new(1.0, 0.0) - z.z1 * w.z1.conj();
    let expo = params.alpha + params.beta + params.theta + f64::from(n) + 3.0;
    Ok((z.z2 * w.z2.conj()).powu(n) * (-log_embed_const(params, n)?).exp() * base.powf(-expo))
}

/// Full kernel through the closed form with two Gauss functions of
/// x = z2 w̄2 / (1 − z1 w̄1).
pub fn ball_full_kernel(params: &BallParams, z: &Point2, w: &Point2, cfg: &TruncationConfig) -> Result<SeriesResult> {
    params.validate()?;
    check_point(z)?;
    check_point(w)?;
    let BallParams { alpha, beta, theta } = *params;
    let base = Complex64::new(1.0, 0.0) - z.z1 * w.z1.conj();
    let x = z.z2 * w.z2.conj() / base;
    if x.norm() >= 1.0 {
        return domain(format!("|z2 w2*/(1 - z1 w1*)| = {} is not below 1", x.norm()));
    }
    let log_pref = log_gamma(alpha + theta + 2.0)? - log_gamma(alpha + 1.0)? - log_gamma(theta + 1.0)?;
    let pref = base.powf(-(alpha + beta + theta + 3.0)) * log_pref.exp();
    // no transformation formulas near |x| = 1: refuse with the distances instead
    let near_sphere = |e: Error| match e {
        Error::NonConvergence { terms, .. } => Error::Domain(format!(
            "points too close to the unit sphere for the series (1 - |z|^2 = {:.3e}, 1 - |w|^2 = {:.3e}, \
             1 - |x| = {:.3e}, {terms} terms)",
            1.0 - z.z1.norm_sqr() - z.z2.norm_sqr(),
            1.0 - w.z1.norm_sqr() - w.z2.norm_sqr(),
            1.0 - x.norm()
        )),
        e => e,
    };
    let f1 = hyp2f1(alpha + theta + 3.0, 1.0, theta + 1.0, x, cfg).map_err(near_sphere)?;
    let f2 = hyp2f1(alpha + theta + 2.0, 1.0, theta + 1.0, x, cfg).map_err(near_sphere)?;
    let c1 = alpha + theta + 2.0;
    let value = pref * (f1.value * c1 + f2.value * beta);
    let tail = pref.norm() * (c1.abs() * f1.tail_bound + beta.abs() * f2.tail_bound);
    Ok(SeriesResult { value, terms_used: f1.terms_used.max(f2.terms_used), tail_bound: tail })
}

/// Full kernel as the direct sum Σ_N Q_N (cross-check path).
pub fn ball_full_kernel_series(
    params: &BallParams,
    z: &Point2,
    w: &Point2,
    cfg: &TruncationConfig,
) -> Result<SeriesResult> {
    params.validate()?;
    check_point(z)?;
    check_point(w)?;
    let base = Complex64::new(1.0, 0.0) - z.z1 * w.z1.conj();
    let x = z.z2 * w.z2.conj() / base;
    let q0 = ball_qn_kernel(params, 0, z, w)?;
    if x == Complex64::new(0.0, 0.0) {
        return Ok(SeriesResult { value: q0, terms_used: 1, tail_bound: 0.0 });
    }
    let mut sum = q0;
    let mut term = q0;
    let mut run = SmallTermRun::new(cfg);
    let s0 = params.alpha + params.beta + params.theta;
    for n in 0..cfg.max_terms as u32 {
        // Q_{N+1}/Q_N = x · (c+N+3)(α+θ+N+2) / ((c+N+2)(θ+N+1)), c = α+β+θ
        let nf = f64::from(n);
        let ratio_real = (s0 + nf + 3.0) * (params.alpha + params.theta + nf + 2.0)
            / ((s0 + nf + 2.0) * (params.theta + nf + 1.0));
        term *= x * ratio_real;
        sum += term;
        let small = run.observe(term.norm(), sum.norm(), cfg.tolerance);
        // the real factor decreases towards 1 once N is past the parameters
        let q = x.norm() * ratio_real;
        if small && q < 1.0 {
            let tail = term.norm() * q / (1.0 - q);
            if tail <= cfg.tolerance * sum.norm().max(1.0) {
                return Ok(SeriesResult { value: sum, terms_used: n as usize + 2, tail_bound: tail });
            }
        }
    }
    Err(Error::NonConvergence { what: "ball kernel series".into(), terms: cfg.max_terms, tail: term.norm() })
}

/// Ball space with fixed parameters and truncation policy.
#[derive(Debug, Clone)]
pub struct BallSpace {
    pub params: BallParams,
    pub cfg: TruncationConfig,
}

impl BallSpace {
    pub fn new(params: BallParams, cfg: TruncationConfig) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, cfg })
    }

    pub fn full_kernel(&self, z: &Point2, w: &Point2) -> Result<SeriesResult> {
        ball_full_kernel(&self.params, z, w, &self.cfg)
    }
}
