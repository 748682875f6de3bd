use num_complex::Complex64;

use super::asymptotic::unit_argument_tail;
use super::{is_nonpositive_integer, SeriesResult};
use crate::config::{SmallTermRun, TruncationConfig};
use crate::error::{domain, Error, Result};

/// Gauss hypergeometric function ₂F₁(a, b; c; x) for |x| < 1.
///
/// Terms are summed forward; once the term ratio is provably below one the
/// remaining tail is bounded geometrically, and the sum stops when that bound
/// and a run of consecutive terms are both under tolerance.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: Complex64, cfg: &TruncationConfig) -> Result<SeriesResult> {
    if is_nonpositive_integer(c) {
        return domain(format!("2F1: c = {c} is a non-positive integer"));
    }
    let r = x.norm();
    if !(r < 1.0) {
        return domain(format!("2F1: |x| = {r} is not below 1"));
    }
    let tol = cfg.tolerance;
    // beyond this index the ratio |(a+n)(b+n)/((c+n)(n+1))| is monotone
    let monotone_from = (4.0 * (a.abs() + b.abs() + c.abs()) + 4.0) as usize;
    let ratio = |n: f64| ((a + n) * (b + n) / ((c + n) * (n + 1.0))).abs();

    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut run = SmallTermRun::new(cfg);
    let mut tail = f64::INFINITY;
    for n in 0..cfg.max_terms {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term == Complex64::new(0.0, 0.0) && (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
            return Ok(SeriesResult { value: sum, terms_used: n + 2, tail_bound: 0.0 });
        }
        let small = run.observe(term.norm(), sum.norm(), tol);
        if n + 1 >= monotone_from {
            let q = r * ratio(nf + 1.0).max(1.0);
            if q < 1.0 {
                tail = term.norm() * q / (1.0 - q);
                if small && tail <= tol * sum.norm().max(1.0) {
                    return Ok(SeriesResult { value: sum, terms_used: n + 2, tail_bound: tail });
                }
            }
        }
    }
    Err(Error::NonConvergence {
        what: format!("2F1({a}, {b}; {c}; {x})"),
        terms: cfg.max_terms,
        tail,
    })
}

/// Generalized hypergeometric ₃F₂(a1, a2, a3; b1, b2; 1).
///
/// Requires the parameter excess b1 + b2 − a1 − a2 − a3 to be positive. The
/// terms decay only algebraically, like n^{-(excess+1)}, so the series is
/// summed directly up to an index M well beyond the parameters and the rest
/// is added from the asymptotic expansion of the terms. The reported tail
/// bound is the error estimate of that asymptotic remainder.
pub fn hyp3f2_unit(a1: f64, a2: f64, a3: f64, b1: f64, b2: f64, cfg: &TruncationConfig) -> Result<SeriesResult> {
    let upper = [a1, a2, a3];
    let lower = [b1, b2];
    if let Some(b) = lower.iter().find(|&&b| is_nonpositive_integer(b)) {
        return domain(format!("3F2: lower parameter {b} is a non-positive integer"));
    }
    let excess = b1 + b2 - a1 - a2 - a3;
    if !(excess > 0.0) {
        return domain(format!("3F2 at 1 diverges: parameter excess {excess} is not positive"));
    }
    let ratio = |n: f64| (a1 + n) * (a2 + n) * (a3 + n) / ((b1 + n) * (b2 + n) * (n + 1.0));

    // terminating series: exact finite sum
    if let Some(order) = upper
        .iter()
        .filter(|&&a| is_nonpositive_integer(a))
        .map(|&a| (-a) as usize)
        .min()
    {
        let mut sum = 1.0;
        let mut term = 1.0;
        for n in 0..order {
            term *= ratio(n as f64);
            sum += term;
        }
        return Ok(SeriesResult::real(sum, order + 1, 0.0));
    }

    let tol = cfg.tolerance;
    let scale = upper.iter().chain(lower.iter()).fold(1.0f64, |m, p| m.max(p.abs()));
    let mut m = ((40.0 * scale) as usize).max(200);
    let mut last_err = f64::INFINITY;
    while m <= cfg.max_terms {
        let mut sum = 0.0;
        let mut term = 1.0;
        for n in 0..m {
            sum += term;
            term *= ratio(n as f64);
        }
        let (tail, err) = unit_argument_tail(&upper, &[b1, b2, 1.0], m, term);
        let value = sum + tail;
        let bound = err + 4.0 * f64::EPSILON * value.abs();
        if bound <= tol * value.abs().max(1.0) {
            return Ok(SeriesResult::real(value, m, bound));
        }
        last_err = bound;
        m *= 2;
    }
    Err(Error::NonConvergence {
        what: format!("3F2({a1}, {a2}, {a3}; {b1}, {b2}; 1)"),
        terms: cfg.max_terms,
        tail: last_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::log_gamma;
    use proptest::prelude::*;

    fn cfg() -> TruncationConfig {
        TruncationConfig::default()
    }

    #[test]
    fn hyp2f1_at_zero_is_one() {
        let r = hyp2f1(1.3, -0.4, 2.2, Complex64::new(0.0, 0.0), &cfg()).unwrap();
        assert_eq!(r.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn hyp2f1_geometric() {
        let r = hyp2f1(1.0, 1.0, 1.0, Complex64::new(0.5, 0.0), &cfg()).unwrap();
        assert!((r.value - 2.0).norm() < 1e-12);
        assert!(r.tail_bound <= 1e-12 * 2.0);
    }

    #[test]
    fn hyp2f1_binomial_identity() {
        let alpha = 0.5;
        let x = Complex64::new(0.3, 0.2);
        let r = hyp2f1(alpha + 3.0, 1.0, 1.0, x, &cfg()).unwrap();
        let expect = (Complex64::new(1.0, 0.0) - x).powf(-(alpha + 3.0));
        assert!((r.value - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn hyp2f1_terminating_polynomial() {
        // 2F1(-2, b; c; x) = 1 - 2bx/c + b(b+1)x²/(c(c+1))
        let (b, c, x) = (1.5, 2.5, 0.7);
        let r = hyp2f1(-2.0, b, c, Complex64::new(x, 0.0), &cfg()).unwrap();
        let expect = 1.0 - 2.0 * b * x / c + b * (b + 1.0) * x * x / (c * (c + 1.0));
        assert!((r.value.re - expect).abs() < 1e-15);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn hyp2f1_domain_errors() {
        assert!(matches!(hyp2f1(1.0, 1.0, 1.0, Complex64::new(1.0, 0.0), &cfg()), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(1.0, 1.0, -2.0, Complex64::new(0.1, 0.0), &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn hyp2f1_term_cap() {
        let tight = TruncationConfig { max_terms: 5, ..cfg() };
        assert!(matches!(
            hyp2f1(1.0, 1.0, 1.0, Complex64::new(0.9, 0.0), &tight),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn hyp3f2_terminating_when_a1_zero() {
        let r = hyp3f2_unit(0.0, 2.3, 1.1, 3.0, 4.5, &cfg()).unwrap();
        assert_eq!(r.value.re, 1.0);
    }

    #[test]
    fn hyp3f2_reduces_to_gauss_sum() {
        // 3F2(a, b, c; c, d; 1) = 2F1(a, b; d; 1) = Γ(d)Γ(d-a-b)/(Γ(d-a)Γ(d-b))
        let (a, b, c, d) = (0.7, 1.2, 2.9, 2.6);
        let r = hyp3f2_unit(a, b, c, c, d, &cfg()).unwrap();
        let lg = |x| log_gamma(x).unwrap();
        let expect = (lg(d) + lg(d - a - b) - lg(d - a) - lg(d - b)).exp();
        assert!((r.value.re - expect).abs() < 1e-12 * expect, "{} vs {expect}", r.value.re);
    }

    #[test]
    fn hyp3f2_saalschutz() {
        // balanced terminating series: 3F2(-n, a, b; c, 1+a+b-c-n; 1) = (c-a)_n (c-b)_n / ((c)_n (c-a-b)_n)
        use crate::specfun::pochhammer;
        let (n, a, b, c) = (4u32, 1.3, 0.6, 2.2);
        let r = hyp3f2_unit(-f64::from(n), a, b, c, 1.0 + a + b - c - f64::from(n), &cfg()).unwrap();
        let expect = pochhammer(c - a, n) * pochhammer(c - b, n) / (pochhammer(c, n) * pochhammer(c - a - b, n));
        assert!((r.value.re - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn hyp3f2_tiny_excess_against_gauss_sum() {
        // excess 0.05: the term sum alone would need ~10^200 terms
        let (a, b, d) = (0.5, 0.45, 1.0);
        let r = hyp3f2_unit(a, b, 3.0, 3.0, d, &cfg()).unwrap();
        let lg = |x| log_gamma(x).unwrap();
        let expect = (lg(d) + lg(d - a - b) - lg(d - a) - lg(d - b)).exp();
        assert!((r.value.re - expect).abs() < 1e-11 * expect, "{} vs {expect}", r.value.re);
    }

    #[test]
    fn hyp3f2_domain() {
        assert!(matches!(hyp3f2_unit(1.0, 1.0, 1.0, 1.0, 2.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(hyp3f2_unit(1.0, 1.0, 1.0, -1.0, 9.0, &cfg()), Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn hyp2f1_binomial_series(a in 0.0f64..5.0, re in -0.56f64..0.56, im in -0.56f64..0.56) {
            let x = Complex64::new(re, im);
            let tol = 1e-12;
            let r = hyp2f1(a, 1.0, 1.0, x, &TruncationConfig::with_tolerance(tol)).unwrap();
            let check = r.value * (Complex64::new(1.0, 0.0) - x).powf(a);
            prop_assert!((check - 1.0).norm() <= 10.0 * tol * r.value.norm().max(1.0));
        }

        #[test]
        fn hyp2f1_tail_bound_is_honest(a in -2.5f64..4.0, b in 0.1f64..3.0, c in 0.2f64..4.0, re in -0.8f64..0.8) {
            let x = Complex64::new(re, 0.3 * re);
            let coarse = hyp2f1(a, b, c, x, &TruncationConfig::with_tolerance(1e-9)).unwrap();
            let fine = hyp2f1(a, b, c, x, &TruncationConfig::with_tolerance(1e-10)).unwrap();
            prop_assert!((coarse.value - fine.value).norm() <= coarse.tail_bound + 1e-15 * fine.value.norm());
        }
    }
}
