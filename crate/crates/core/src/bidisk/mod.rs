//! Weighted Bergman spaces on the bidisk with weight
//! |z1 − z2|^{2θ} |1 − z̄2 z1|^{2ϑ} dA_α(z1) dA_β(z2).

mod expansion;
mod kernel;

use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::config::TruncationConfig;
use crate::error::{domain, Error, Result};
use crate::specfun::scaled::Scaled;
use crate::specfun::{factorial, hyp3f2_unit, log_gamma, pochhammer};

pub use expansion::{hardy_norm_expansion, norm_expansion, restriction_transform};
pub use kernel::{diag_kernel, full_kernel, q_kernel, taylor_blocks, BidiskSpace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BidiskParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub vartheta: f64,
}

impl BidiskParams {
    pub fn new(alpha: f64, beta: f64, theta: f64, vartheta: f64) -> Result<Self> {
        let p = Self { alpha, beta, theta, vartheta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let named = [("alpha", self.alpha), ("beta", self.beta), ("theta", self.theta), ("vartheta", self.vartheta)];
        for (name, v) in named {
            if !(v > -1.0) || !v.is_finite() {
                return domain(format!("{name} must be a finite number > -1, got {v}"));
            }
        }
        if !(self.alpha + self.beta + 2.0 * self.theta + 2.0 * self.vartheta + 3.0 > 0.0) {
            return domain("alpha + beta + 2 theta + 2 vartheta + 3 must be positive");
        }
        Ok(())
    }

    /// α + θ + ϑ + 2, the exponent attached to z1 in the diagonal kernel.
    pub fn a(&self) -> f64 {
        self.alpha + self.theta + self.vartheta + 2.0
    }

    /// β + θ + ϑ + 2.
    pub fn b(&self) -> f64 {
        self.beta + self.theta + self.vartheta + 2.0
    }

    /// α + β + 2θ + 2ϑ + 2, the index of the restriction space.
    pub fn s(&self) -> f64 {
        self.alpha + self.beta + 2.0 * self.theta + 2.0 * self.vartheta + 2.0
    }

    /// Same space with θ replaced by θ + n.
    pub fn shifted(&self, n: u32) -> Self {
        Self { theta: self.theta + f64::from(n), ..*self }
    }

    /// θ as an integer when it is one and ϑ = 0 (the exactly computable case).
    pub fn integer_theta(&self) -> Option<u32> {
        (self.vartheta == 0.0 && self.theta >= 0.0 && self.theta.fract() == 0.0 && self.theta <= 64.0)
            .then_some(self.theta as u32)
    }
}

/// σ(α, β, θ, ϑ), the reciprocal of the total mass of the weight.
pub fn sigma(params: &BidiskParams, cfg: &TruncationConfig) -> Result<f64> {
    Ok((-log_inverse_sigma(params, cfg)?).exp())
}

/// 1/σ as a ₃F₂ at unit argument. Of the two Thomae-equivalent series the
/// one with the larger parameter excess (β + 1 or θ + 1) is summed.
pub fn inverse_sigma(params: &BidiskParams, cfg: &TruncationConfig) -> Result<f64> {
    Ok(log_inverse_sigma(params, cfg)?.exp())
}

/// ln(1/σ); finite even where σ itself underflows (large θ).
pub(crate) fn log_inverse_sigma(params: &BidiskParams, cfg: &TruncationConfig) -> Result<f64> {
    params.validate()?;
    if params.theta > params.beta {
        log_inverse_sigma_swapped(params, cfg)
    } else {
        log_inverse_sigma_direct(params, cfg)
    }
}

fn log_inverse_sigma_direct(params: &BidiskParams, cfg: &TruncationConfig) -> Result<f64> {
    let BidiskParams { alpha, beta, theta, .. } = *params;
    let (a, s) = (params.a(), params.s());
    let log_pref = log_gamma(alpha + 2.0)? + log_gamma(theta + 1.0)? - log_gamma(alpha + theta + 2.0)?
        + ((beta + 1.0) / (s + 1.0)).ln();
    let f = hyp3f2_unit(theta + 1.0, a, a, alpha + theta + 2.0, s + 2.0, cfg)?;
    Ok(log_pref + f.value.re.ln())
}

fn log_inverse_sigma_swapped(params: &BidiskParams, cfg: &TruncationConfig) -> Result<f64> {
    let BidiskParams { alpha, beta, theta, vartheta } = *params;
    let s = params.s();
    let c = alpha + beta + theta + vartheta + 3.0;
    let log_pref = log_gamma(alpha + 2.0)? + log_gamma(beta + 2.0)? + log_gamma(s + 1.0)? - 2.0 * log_gamma(c)?;
    let f = hyp3f2_unit(alpha + 1.0, beta + 1.0, s - theta + 1.0, c, c, cfg)?;
    Ok(log_pref + f.value.re.ln())
}

/// Gamma-function form of σ, valid for ϑ = 0 only.
pub fn sigma_closed_form(params: &BidiskParams) -> Result<f64> {
    params.validate()?;
    if params.vartheta != 0.0 {
        return domain("the Gamma-function form of sigma requires vartheta = 0");
    }
    let BidiskParams { alpha, beta, theta, .. } = *params;
    let log_inv = log_gamma(alpha + 2.0)? + log_gamma(beta + 2.0)? + log_gamma(theta + 1.0)?
        + log_gamma(alpha + beta + 2.0 * theta + 3.0)?
        - log_gamma(alpha + theta + 2.0)?
        - log_gamma(beta + theta + 2.0)?
        - log_gamma(alpha + beta + theta + 3.0)?;
    Ok((-log_inv).exp())
}

const SIGMA_TOLERANCE: f64 = 2e-15;

/// Lazily grown table of σ(α, β, θ + N, ϑ), N = 0, 1, ….
///
/// The Gamma prefactors of both ₃F₂ forms are advanced by their rational
/// recurrences in θ rather than recomputed from log-Gamma differences, and
/// values are kept with an extended exponent since σ_N decays like 4^{−N}.
#[derive(Debug)]
pub(crate) struct SigmaTable {
    params: BidiskParams,
    cfg: TruncationConfig,
    state: RwLock<TableState>,
}

#[derive(Debug)]
struct TableState {
    values: Vec<Scaled>,
    /// prefactors of the direct and swapped forms at θ + values.len()
    direct: Scaled,
    swapped: Scaled,
}

impl SigmaTable {
    /// σ_N is computed to SIGMA_TOLERANCE whatever the series tolerance: the
    /// kernel sums Q_N terms that may cancel far below their own size.
    pub(crate) fn new(params: BidiskParams, cfg: TruncationConfig) -> Result<Self> {
        params.validate()?;
        let cfg = TruncationConfig { tolerance: cfg.tolerance.min(SIGMA_TOLERANCE), ..cfg };
        let BidiskParams { alpha, beta, theta, vartheta } = params;
        let (s, c) = (params.s(), alpha + beta + theta + vartheta + 3.0);
        let direct = Scaled::exp_real(
            log_gamma(alpha + 2.0)? + log_gamma(theta + 1.0)? - log_gamma(alpha + theta + 2.0)?
                + ((beta + 1.0) / (s + 1.0)).ln(),
        );
        let swapped = Scaled::exp_real(
            log_gamma(alpha + 2.0)? + log_gamma(beta + 2.0)? + log_gamma(s + 1.0)? - 2.0 * log_gamma(c)?,
        );
        let state = TableState { values: Vec::new(), direct, swapped };
        Ok(Self { params, cfg, state: RwLock::new(state) })
    }

    pub(crate) fn get(&self, n: u32) -> Result<f64> {
        Ok(self.scaled(n)?.to_f64())
    }

    pub(crate) fn scaled(&self, n: u32) -> Result<Scaled> {
        let idx = n as usize;
        if let Some(&v) = self.state.read().expect("sigma table poisoned").values.get(idx) {
            return Ok(v);
        }
        let mut st = self.state.write().expect("sigma table poisoned");
        while st.values.len() <= idx {
            let p = self.params.shifted(st.values.len() as u32);
            let BidiskParams { alpha, beta, theta, vartheta } = p;
            let (a, s, c) = (p.a(), p.s(), alpha + beta + theta + vartheta + 3.0);
            let inverse = if theta > beta {
                let f = hyp3f2_unit(alpha + 1.0, beta + 1.0, s - theta + 1.0, c, c, &self.cfg)?;
                st.swapped.mul_c(f.value)
            } else {
                let f = hyp3f2_unit(theta + 1.0, a, a, alpha + theta + 2.0, s + 2.0, &self.cfg)?;
                st.direct.mul_c(f.value)
            };
            st.values.push(inverse.recip());
            st.direct = st.direct.mul_c(((s + 1.0) * (theta + 1.0) / ((s + 3.0) * (alpha + theta + 2.0))).into());
            st.swapped = st.swapped.mul_c(((s + 1.0) * (s + 2.0) / (c * c)).into());
        }
        Ok(st.values[idx])
    }
}

fn coeff_raw(alpha: f64, beta: f64, theta: f64, vartheta: f64, k: u32, n: u32) -> Result<f64> {
    if k > n {
        return Err(Error::Index { k, n });
    }
    let j = n - k;
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let kf = f64::from(k);
    let num = pochhammer(alpha + theta + vartheta + kf + 2.0, j);
    let den = pochhammer(alpha + beta + 2.0 * theta + 2.0 * vartheta + f64::from(n) + kf + 3.0, j);
    Ok(sign / (factorial(k) * factorial(j)) * num / den)
}

/// a_{k,N}: coefficients of the restriction transform onto vanishing order N.
pub fn coeff_a(params: &BidiskParams, k: u32, n: u32) -> Result<f64> {
    coeff_raw(params.alpha, params.beta, params.theta, params.vartheta, k, n)
}

/// b_{k,N}: the Hardy-space counterpart (α = β = −1, ϑ = 0).
pub fn coeff_b(theta: f64, k: u32, n: u32) -> Result<f64> {
    coeff_raw(-1.0, -1.0, theta, 0.0, k, n)
}

/// Σ_{k=n}^{N} a_{k,N} n! C(k,n) (α+θ+ϑ+n+2)_{k−n} / (α+β+2θ+2ϑ+2n+4)_{k−n},
/// which equals the Kronecker delta δ_{nN}.
pub fn delta_sum(params: &BidiskParams, n: u32, big_n: u32) -> Result<f64> {
    if n > big_n {
        return Err(Error::Index { k: n, n: big_n });
    }
    let nf = f64::from(n);
    let upper = params.a() + nf;
    let lower = params.s() + 2.0 * nf + 2.0;
    let mut sum = 0.0;
    for k in n..=big_n {
        let j = k - n;
        sum += coeff_a(params, k, big_n)? * factorial(n) * crate::specfun::binomial(k, n) * pochhammer(upper, j)
            / pochhammer(lower, j);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> TruncationConfig {
        TruncationConfig::default()
    }

    #[test]
    fn validation() {
        assert!(BidiskParams::new(-1.0, 0.0, 0.0, 0.0).is_err());
        assert!(BidiskParams::new(0.0, 0.0, f64::NAN, 0.0).is_err());
        assert!(BidiskParams::new(-0.9, -0.9, -0.9, -0.9).is_err());
        let p = BidiskParams::new(0.5, 0.25, 1.0, 0.0).unwrap();
        assert_eq!(p.a(), 3.5);
        assert_eq!(p.b(), 3.25);
        assert_eq!(p.s(), 4.75);
        assert_eq!(p.integer_theta(), Some(1));
    }

    #[test]
    fn sigma_trivial_values() {
        let one = sigma(&BidiskParams::new(0.0, 0.0, 0.0, 0.0).unwrap(), &cfg()).unwrap();
        assert!((one - 1.0).abs() < 1e-12);
        let moment = sigma(&BidiskParams::new(0.0, 0.0, 1.0, 0.0).unwrap(), &cfg()).unwrap();
        assert!((moment - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_reduces_to_gamma_form() {
        for &(a, b, t) in &[(0.5, 0.25, 1.5), (0.5, 0.25, 0.5), (2.0, -0.5, 3.25), (-0.7, 4.0, 0.1)] {
            let p = BidiskParams::new(a, b, t, 0.0).unwrap();
            let lhs = sigma(&p, &cfg()).unwrap();
            let rhs = sigma_closed_form(&p).unwrap();
            assert!((lhs / rhs - 1.0).abs() < 1e-11, "{a} {b} {t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn both_series_for_inverse_sigma_agree() {
        let cfg = TruncationConfig::default();
        for (a, b, t, v) in [(0.5, 0.3, 0.7, 0.4), (-0.5, 1.5, 0.2, 1.3), (2.0, 0.0, 1.0, 2.5), (0.1, -0.6, -0.4, 0.0)] {
            let p = BidiskParams::new(a, b, t, v).unwrap();
            let x = log_inverse_sigma_direct(&p, &cfg).unwrap();
            let y = log_inverse_sigma_swapped(&p, &cfg).unwrap();
            assert!((x - y).abs() < 1e-12, "{p:?}: {x} vs {y}");
        }
    }

    #[test]
    fn sigma_survives_large_theta() {
        let cfg = TruncationConfig::default();
        let p = BidiskParams::new(0.5, -0.9, 190.0, 0.0).unwrap();
        let s = sigma(&p, &cfg).unwrap();
        let c = sigma_closed_form(&p).unwrap();
        assert!((s - c).abs() < 1e-10 * c, "{s} vs {c}");
    }

    #[test]
    fn sigma_table_matches_direct() {
        let p = BidiskParams::new(0.3, 0.1, 0.5, 0.2).unwrap();
        let table = SigmaTable::new(p, cfg()).unwrap();
        for n in [3, 0, 7] {
            let direct = sigma(&p.shifted(n), &cfg()).unwrap();
            assert!((table.get(n).unwrap() - direct).abs() < 2e-12 * direct);
        }
    }

    #[test]
    fn sigma_table_is_accurate_at_high_order() {
        let p = BidiskParams::new(1.43, 1.32, 0.0, 0.0).unwrap();
        let table = SigmaTable::new(p, cfg()).unwrap();
        // ratio of consecutive closed forms is rational in θ
        let mut expect = sigma_closed_form(&p).unwrap();
        for n in 0..60u32 {
            let got = table.get(n).unwrap();
            assert!((got - expect).abs() < 1e-14 * f64::from(n + 1) * expect, "N={n}: {got} vs {expect}");
            let (a, b, t) = (p.alpha, p.beta, f64::from(n));
            expect *= (a + t + 2.0) * (b + t + 2.0) * (a + b + t + 3.0)
                / ((t + 1.0) * (a + b + 2.0 * t + 3.0) * (a + b + 2.0 * t + 4.0));
        }
    }

    #[test]
    fn coefficient_instances() {
        let p = BidiskParams::new(0.5, 0.25, 1.5, 0.3).unwrap();
        for n in 0..8 {
            assert!((coeff_a(&p, n, n).unwrap() - 1.0 / factorial(n)).abs() < 1e-15);
        }
        let expected = -(p.a()) / (p.s() + 2.0);
        assert!((coeff_a(&p, 0, 1).unwrap() - expected).abs() < 1e-15);
        assert_eq!(coeff_a(&p, 3, 2), Err(Error::Index { k: 3, n: 2 }));
        let hardy_like = BidiskParams { alpha: -1.0, beta: -1.0, theta: 0.7, vartheta: 0.0 };
        assert_eq!(coeff_b(0.7, 1, 4).unwrap(), coeff_a(&hardy_like, 1, 4).unwrap());
    }

    proptest! {
        #[test]
        fn delta_identity(alpha in -0.9f64..3.0, beta in -0.9f64..3.0, theta in -0.9f64..3.0,
                          vartheta in 0.0f64..2.0, big_n in 0u32..=10) {
            let p = BidiskParams::new(alpha, beta, theta, vartheta).unwrap();
            for n in 0..=big_n {
                let v = delta_sum(&p, n, big_n).unwrap();
                let expected = if n == big_n { 1.0 } else { 0.0 };
                prop_assert!((v - expected).abs() < 1e-10, "n={} N={} v={}", n, big_n, v);
            }
        }
    }
}
