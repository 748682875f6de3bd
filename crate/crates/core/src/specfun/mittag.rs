use num_complex::Complex64;

use super::dd::{CDd, Dd};
use super::{log_gamma, SeriesResult};
use crate::config::{SmallTermRun, TruncationConfig};
use crate::error::{domain, Error, Result};

struct Partial {
    value: Complex64,
    abs_sum: f64,
    terms: usize,
    tail: f64,
}

/// Sums Σ_n t_n with t_{n+1} = t_n · step(n), stopping on the small-term run
/// once the ratio bound `ratio_bound(n)` certifies a geometric tail. Terms and
/// partial sums are carried in double-double so that cancellation between
/// large terms costs nothing at double precision.
fn sum_forward(
    first: Complex64,
    step: impl Fn(CDd, usize) -> CDd,
    ratio_bound: impl Fn(usize) -> f64,
    cfg: &TruncationConfig,
    what: impl Fn() -> String,
) -> Result<Partial> {
    let mut sum = CDd::from_c64(first);
    let mut abs_sum = first.norm();
    let mut term = sum;
    let mut run = SmallTermRun::new(cfg);
    let mut tail = f64::INFINITY;
    for n in 0..cfg.max_terms {
        term = step(term, n);
        sum = sum.add(term);
        let (t, s) = (term.norm(), sum.norm());
        abs_sum += t;
        let small = run.observe(t, s, cfg.tolerance);
        let q = ratio_bound(n + 1);
        if q < 1.0 {
            tail = t * q / (1.0 - q);
            if small && tail <= cfg.tolerance * s.max(1.0) {
                return Ok(Partial { value: sum.to_c64(), abs_sum, terms: n + 2, tail });
            }
        }
        if t == 0.0 {
            return Ok(Partial { value: sum.to_c64(), abs_sum, terms: n + 2, tail: 0.0 });
        }
    }
    Err(Error::NonConvergence { what: what(), terms: cfg.max_terms, tail })
}

/// θ + k in double-double, exact for integer k.
pub(crate) fn shift(theta: f64, k: usize) -> Dd {
    Dd::new(theta).add(Dd::new(k as f64))
}

/// The entire function E_θ(x) = Σ_{N≥0} xᴺ / Γ(θ+N+1), θ > −1.
///
/// Two routes are evaluated: the defining series, and Kummer's transformation
/// E_θ(x) = eˣ/Γ(θ+1) · Σ_n θ/(θ+n) · (−x)ⁿ/n!. The route whose summands are
/// smaller in absolute value (less cancellation) is returned. For θ = 0 the
/// second route collapses to eˣ exactly.
pub fn mittag_e(theta: f64, x: Complex64, cfg: &TruncationConfig) -> Result<SeriesResult> {
    if !(theta > -1.0) || !theta.is_finite() {
        return domain(format!("E_θ requires θ > -1, got {theta}"));
    }
    let r = x.norm();
    let lead = (-log_gamma(theta + 1.0)?).exp();
    let label = || format!("E_{theta}({x})");
    let xd = CDd::from_c64(x);

    let direct = sum_forward(
        Complex64::new(lead, 0.0),
        |t, n| t.mul(xd).div_real(shift(theta, n + 1)),
        // |t_{m+1}/t_m| = |x|/(θ+m+1), decreasing in m
        |n| r / (theta + n as f64 + 1.0),
        cfg,
        label,
    )?;

    let exp_x = x.exp();
    let kummer = if theta == 0.0 {
        Some(Partial { value: Complex64::new(1.0, 0.0), abs_sum: 1.0, terms: 1, tail: 0.0 })
    } else {
        // u_n = θ/(θ+n) v_n with v_n = (-x)^n/n!;  u_{n+1}/u_n = (θ+n)/(θ+n+1) · (-x)/(n+1)
        let neg_x = CDd::from_c64(-x);
        sum_forward(
            Complex64::new(1.0, 0.0),
            |t, n| {
                let factor = shift(theta, n).div(shift(theta, n + 1).mul(Dd::new(n as f64 + 1.0)));
                t.mul(neg_x).scale(factor)
            },
            |n| {
                let nf = n as f64;
                r * ((theta + nf) / ((theta + nf + 1.0) * (nf + 1.0))).abs()
            },
            cfg,
            label,
        )
        .ok()
    };

    let scale = exp_x.norm() * lead;
    match kummer {
        Some(k) if scale * k.abs_sum < direct.abs_sum && scale.is_finite() => Ok(SeriesResult {
            value: exp_x * lead * k.value,
            terms_used: k.terms,
            tail_bound: scale * k.tail,
        }),
        _ => Ok(SeriesResult { value: direct.value, terms_used: direct.terms, tail_bound: direct.tail }),
    }
}
