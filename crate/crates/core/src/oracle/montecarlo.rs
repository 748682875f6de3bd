//! Seeded Monte Carlo estimates of single Gram entries, used as a coarse
//! cross-check of the exact and quadrature oracles.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SpaceParams;
use crate::error::{domain, Result};
use crate::point::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: Complex64,
    /// Standard error of the mean (of the real and imaginary parts combined).
    pub std_error: f64,
    pub samples: usize,
}

/// Draws one radius from the normalized radial law of the given axis,
/// from a uniform variate `u`.
fn radius(kind: Axis, u: f64) -> f64 {
    match kind {
        // r² = 1 − (1−u)^{1/(a+1)} for (a+1)(1−r²)^a d(r²)
        Axis::Disc(a) => (1.0 - (1.0 - u).powf(1.0 / (a + 1.0))).max(0.0).sqrt(),
        // r² ~ Exp(a)
        Axis::Gauss(a) => (-(1.0 - u).ln() / a).sqrt(),
    }
}

#[derive(Clone, Copy)]
enum Axis {
    Disc(f64),
    Gauss(f64),
}

/// ⟨z1^{m1} z2^{n1}, z1^{m2} z2^{n2}⟩ by Monte Carlo with antithetic pairs
/// (u, φ) ↔ (1 − u, φ + π) on both axes.
pub fn mc_inner_product(
    space: &SpaceParams,
    left: (u32, u32),
    right: (u32, u32),
    pairs: usize,
    seed: u64,
) -> Result<McEstimate> {
    let (ax1, ax2, theta, vartheta, mass) = match *space {
        SpaceParams::Bidisk(p) => (Axis::Disc(p.alpha), Axis::Disc(p.beta), p.theta, p.vartheta, 1.0),
        SpaceParams::Fock(p) => (Axis::Gauss(p.alpha), Axis::Gauss(p.beta), p.theta, 0.0, 1.0 / (p.alpha * p.beta)),
        SpaceParams::Ball(_) => return domain("Monte Carlo cross-check is implemented for the bidisk and Fock weights"),
    };
    if pairs == 0 {
        return domain("need at least one sample pair");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let integrand = |z: &Point2| {
        let f = z.z1.powu(left.0) * z.z2.powu(left.1);
        let g = z.z1.powu(right.0) * z.z2.powu(right.1);
        let mut w = 1.0;
        if theta != 0.0 {
            w *= z.diag_gap().norm_sqr().powf(theta);
        }
        if vartheta != 0.0 {
            w *= (Complex64::new(1.0, 0.0) - z.z2.conj() * z.z1).norm_sqr().powf(vartheta);
        }
        f * g.conj() * w
    };
    let (mut sum, mut sum_sq) = (Complex64::new(0.0, 0.0), 0.0);
    for _ in 0..pairs {
        let (u1, u2): (f64, f64) = (rng.random(), rng.random());
        let (p1, p2): (f64, f64) = (rng.random::<f64>() * std::f64::consts::TAU, rng.random::<f64>() * std::f64::consts::TAU);
        let a = Point2::new(
            Complex64::from_polar(radius(ax1, u1), p1),
            Complex64::from_polar(radius(ax2, u2), p2),
        );
        let b = Point2::new(
            Complex64::from_polar(radius(ax1, 1.0 - u1), p1 + std::f64::consts::PI),
            Complex64::from_polar(radius(ax2, 1.0 - u2), p2 + std::f64::consts::PI),
        );
        let v = 0.5 * (integrand(&a) + integrand(&b));
        sum += v;
        sum_sq += v.norm_sqr();
    }
    let n = pairs as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean.norm_sqr()).max(0.0) * n / (n - 1.0).max(1.0);
    Ok(McEstimate { mean: mean * mass, std_error: mass * (var / n).sqrt(), samples: 2 * pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bidisk::BidiskParams;
    use crate::fock::FockParams;
    use crate::oracle::{gram_bidisk_exact, gram_fock_exact};

    #[test]
    fn bidisk_cross_entry_within_three_standard_errors() {
        let p = BidiskParams::new(0.0, 0.0, 1.0, 0.0).unwrap();
        let exact = gram_bidisk_exact(&p, 1).unwrap().blocks[1][(1, 0)];
        let mc = mc_inner_product(&SpaceParams::Bidisk(p), (1, 0), (0, 1), 200_000, 7).unwrap();
        assert!((mc.mean.re - exact).abs() < 3.0 * mc.std_error, "{} ± {} vs {exact}", mc.mean, mc.std_error);
        assert!(mc.mean.im.abs() < 3.0 * mc.std_error);
    }

    #[test]
    fn fock_cross_entry_within_three_standard_errors() {
        let p = FockParams::new(1.0, 1.0, 1.0).unwrap();
        let exact = gram_fock_exact(&p, 1).unwrap().blocks[1][(1, 0)];
        let mc = mc_inner_product(&SpaceParams::Fock(p), (1, 0), (0, 1), 200_000, 7).unwrap();
        assert!((mc.mean.re - exact).abs() < 3.0 * mc.std_error, "{} ± {} vs {exact}", mc.mean, mc.std_error);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let p = SpaceParams::Bidisk(BidiskParams::new(0.5, 0.5, 0.5, 0.5).unwrap());
        let a = mc_inner_product(&p, (1, 1), (1, 1), 1000, 3).unwrap();
        let b = mc_inner_product(&p, (1, 1), (1, 1), 1000, 3).unwrap();
        assert_eq!(a, b);
    }
}
