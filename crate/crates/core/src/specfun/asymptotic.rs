//! Asymptotic tail of hypergeometric series at unit argument.
//!
//! For large n the term t_n = Π(a_i)_n / Π(b_j)_n (with n! folded into the
//! lower list) behaves like C n^{-(s+1)} exp(Σ_k d_k n^{-k}), where the d_k
//! come from the Stirling series of ln Γ. Expanding the exponential and
//! summing each power with the Hurwitz zeta function gives the tail
//! Σ_{n≥M} t_n to high accuracy once M is large compared to the parameters.

use super::binomial;

/// B_0 … B_14 with the B_1 = -1/2 convention.
const BERNOULLI: [f64; 15] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
];

/// Number of inverse powers kept in the expansion of the term.
const ORDER: usize = 12;

fn bernoulli_poly(n: usize, x: f64) -> f64 {
    (0..=n)
        .map(|j| binomial(n as u32, j as u32) * BERNOULLI[j] * x.powi((n - j) as i32))
        .sum()
}

/// Hurwitz zeta ζ(p, m) = Σ_{n≥0} (n+m)^{-p} by Euler–Maclaurin; m must be large.
/// Returns the value and the magnitude of the last correction used.
pub(crate) fn hurwitz_zeta(p: f64, m: f64) -> (f64, f64) {
    let ln_m = m.ln();
    let mut value = (-(p - 1.0) * ln_m).exp() / (p - 1.0) + 0.5 * (-p * ln_m).exp();
    let mut last = 0.0;
    // (p)_{2j-1} / (2j)! accumulated incrementally
    let mut rising = p;
    let mut fact = 2.0;
    for j in 1..=6usize {
        let term = BERNOULLI[2 * j] / fact * rising * (-(p + 2.0 * j as f64 - 1.0) * ln_m).exp();
        value += term;
        last = term.abs();
        rising *= (p + 2.0 * j as f64 - 1.0) * (p + 2.0 * j as f64);
        fact *= (2.0 * j as f64 + 1.0) * (2.0 * j as f64 + 2.0);
    }
    (value, last)
}

/// Tail Σ_{n≥M} t_n of a hypergeometric series at x = 1, given the term t_M.
///
/// `upper` and `lower` must have equal length, with the `n!` factor supplied
/// as a lower parameter equal to 1. Returns `(tail, error_estimate)`.
pub(crate) fn unit_argument_tail(upper: &[f64], lower: &[f64], m: usize, t_m: f64) -> (f64, f64) {
    debug_assert_eq!(upper.len(), lower.len());
    let excess: f64 = lower.iter().sum::<f64>() - upper.iter().sum::<f64>();
    let decay = excess; // t_n ~ n^{-decay}
    let mf = m as f64;

    let mut d = [0.0; ORDER + 1];
    for (k, dk) in d.iter_mut().enumerate().skip(1) {
        let bsum: f64 = upper.iter().map(|&a| bernoulli_poly(k + 1, a)).sum::<f64>()
            - lower.iter().map(|&b| bernoulli_poly(k + 1, b)).sum::<f64>();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        *dk = sign * bsum / (k * (k + 1)) as f64;
    }
    // exp(Σ d_k y^k) = Σ e_k y^k
    let mut e = [0.0; ORDER + 1];
    e[0] = 1.0;
    for k in 1..=ORDER {
        e[k] = (1..=k).map(|j| j as f64 * d[j] * e[k - j]).sum::<f64>() / k as f64;
    }
    let d_at_m: f64 = (1..=ORDER).map(|k| d[k] * mf.powi(-(k as i32))).sum();
    // t_M = C M^{-decay} e^{D(1/M)}  =>  C = t_M M^{decay} e^{-D(1/M)}
    if t_m == 0.0 {
        return (0.0, 0.0);
    }
    let log_scale = decay * mf.ln() - d_at_m;
    // C·x computed as t_M·exp(log_scale + ln x): both factors of C can overflow alone
    let times_scale = |x: f64| if x > 0.0 { t_m * (log_scale + x.ln()).exp() } else { 0.0 };

    let mut tail = 0.0;
    let mut err = 0.0;
    let mut last_two = [0.0f64; 2];
    for (k, &ek) in e.iter().enumerate() {
        let (z, z_err) = hurwitz_zeta(decay + k as f64, mf);
        let term = ek * times_scale(z);
        tail += term;
        err += (ek * times_scale(z_err)).abs();
        last_two = [last_two[1], term.abs()];
    }
    (tail, err + last_two[0] + last_two[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_polynomials() {
        assert!((bernoulli_poly(2, 0.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((bernoulli_poly(2, 3.0) - (9.0 - 3.0 + 1.0 / 6.0)).abs() < 1e-13);
        // B_n(1) = B_n for n ≥ 2
        for (n, b) in BERNOULLI.iter().enumerate().take(12).skip(2) {
            assert!((bernoulli_poly(n, 1.0) - b).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn hurwitz_zeta_against_direct_sum() {
        // ζ(3, 50) by brute force with an integral tail correction far out
        let p = 3.0;
        let direct: f64 = (50..2_000_000).rev().map(|n| (n as f64).powf(-p)).sum::<f64>()
            + 0.5 * 2_000_000f64.powf(-2.0);
        let (z, _) = hurwitz_zeta(p, 50.0);
        assert!((z - direct).abs() < 1e-13 * direct, "{z} vs {direct}");
    }

    #[test]
    fn tail_of_2f1_at_one_matches_gauss() {
        // 2F1(1/2, 1/3; 2; 1) = Γ(2)Γ(7/6)/(Γ(3/2)Γ(5/3)); excess 7/6 converges slowly
        let (a, b, c) = (0.5, 1.0 / 3.0, 2.0);
        let m = 400;
        let mut t = 1.0;
        let mut partial = 0.0;
        for n in 0..m {
            partial += t;
            let nf = n as f64;
            t *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        }
        let (tail, err) = unit_argument_tail(&[a, b], &[c, 1.0], m, t);
        let lg = statrs::function::gamma::ln_gamma;
        let exact = (lg(c) + lg(c - a - b) - lg(c - a) - lg(c - b)).exp();
        assert!(((partial + tail) - exact).abs() < 1e-13, "{} vs {exact}", partial + tail);
        assert!(err < 1e-12);
    }
}
