use nalgebra::DMatrix;

use super::{GramBlocks, SpaceParams, MAX_ORACLE_DEGREE};
use crate::ball::BallParams;
use crate::bidisk::BidiskParams;
use crate::disk::{bergman_monomial_norm_sqr, fock_monomial_norm_sqr};
use crate::error::{domain, Result};
use crate::fock::FockParams;
use crate::poly::BiPoly;
use crate::specfun::{binomial, log_gamma};

fn check_degree(max_degree: usize) -> Result<()> {
    if max_degree > MAX_ORACLE_DEGREE {
        return domain(format!("oracle degree {max_degree} exceeds the cap {MAX_ORACLE_DEGREE}"));
    }
    Ok(())
}

/// Gram blocks of the weight |z1 − z2|^{2θ} μ1(z1) μ2(z2) for integer θ and
/// rotation-invariant μ1, μ2 with moments ∫|z|^{2p} dμ_i = moment_i(p).
/// (z1 − z2)^θ is expanded binomially, leaving products of one-variable moments.
fn binomial_gram(theta: u32, max_degree: usize, m1: impl Fn(u32) -> f64, m2: impl Fn(u32) -> f64) -> Vec<DMatrix<f64>> {
    let coef: Vec<f64> = (0..=theta)
        .map(|i| if (theta - i).is_multiple_of(2) { 1.0 } else { -1.0 } * binomial(theta, i))
        .collect();
    (0..=max_degree as u32)
        .map(|d| {
            let mut g = DMatrix::<f64>::zeros(d as usize + 1, d as usize + 1);
            for a in 0..=d {
                for b in a..=d {
                    // ⟨z1^a z2^{d−a}, z1^b z2^{d−b}⟩ = Σ_{i,j} c_i c_j [a+i = b+j] M1(a+i) M2(d−a+θ−i)
                    let mut s = 0.0;
                    for i in 0..=theta {
                        let p = a + i;
                        if p < b || p - b > theta {
                            continue;
                        }
                        let j = p - b;
                        s += coef[i as usize] * coef[j as usize] * m1(p) * m2(d - a + theta - i);
                    }
                    g[(a as usize, b as usize)] = s;
                    g[(b as usize, a as usize)] = s;
                }
            }
            g
        })
        .collect()
}

/// Exact Gram blocks of the bidisk space for integer θ ≥ 0 and ϑ = 0.
pub fn gram_bidisk_exact(params: &BidiskParams, max_degree: usize) -> Result<GramBlocks> {
    params.validate()?;
    check_degree(max_degree)?;
    let Some(theta) = params.integer_theta() else {
        return domain("exact bidisk Gram blocks need an integer theta >= 0 and vartheta = 0");
    };
    let (alpha, beta) = (params.alpha, params.beta);
    let blocks = binomial_gram(
        theta,
        max_degree,
        |p| bergman_monomial_norm_sqr(alpha, p),
        |p| bergman_monomial_norm_sqr(beta, p),
    );
    Ok(GramBlocks::new(SpaceParams::Bidisk(*params), blocks, true, 0.0))
}

/// Exact Gram blocks of the Fock space for integer θ ≥ 0.
pub fn gram_fock_exact(params: &FockParams, max_degree: usize) -> Result<GramBlocks> {
    params.validate()?;
    check_degree(max_degree)?;
    let Some(theta) = params.integer_theta() else {
        return domain("exact Fock Gram blocks need an integer theta >= 0");
    };
    let (alpha, beta) = (params.alpha, params.beta);
    let blocks = binomial_gram(
        theta,
        max_degree,
        |p| fock_monomial_norm_sqr(alpha, p),
        |p| fock_monomial_norm_sqr(beta, p),
    );
    Ok(GramBlocks::new(SpaceParams::Fock(*params), blocks, true, 0.0))
}

fn log_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// ‖z1^m z2^n‖² in the ball space: B(m+1, n+θ+α+β+2) · B(n+θ+1, α+1).
pub fn ball_monomial_norm_sqr(params: &BallParams, m: u32, n: u32) -> Result<f64> {
    params.validate()?;
    let BallParams { alpha, beta, theta } = *params;
    let (mf, nf) = (f64::from(m), f64::from(n));
    Ok((log_beta(mf + 1.0, nf + theta + alpha + beta + 2.0)? + log_beta(nf + theta + 1.0, alpha + 1.0)?).exp())
}

/// Diagonal Gram blocks of the ball space (monomials are orthogonal).
pub fn ball_monomial_norms(params: &BallParams, max_degree: usize) -> Result<GramBlocks> {
    check_degree(max_degree)?;
    let mut blocks = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree as u32 {
        let diag: Result<Vec<f64>> = (0..=d).map(|m| ball_monomial_norm_sqr(params, m, d - m)).collect();
        blocks.push(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag?)));
    }
    Ok(GramBlocks::new(SpaceParams::Ball(*params), blocks, true, 0.0))
}

/// ‖z1^m z2^n‖² on the sphere with weight |z2|^{2θ}: B(m+1, n+θ+β+1).
pub fn ball_hardy_monomial_norm_sqr(beta: f64, theta: f64, m: u32, n: u32) -> Result<f64> {
    if !(beta + theta > -1.0) {
        return domain("beta + theta must exceed -1");
    }
    Ok(log_beta(f64::from(m) + 1.0, f64::from(n) + theta + beta + 1.0)?.exp())
}

/// Norm on the torus with weight |z1 − z2|^{2θ}, integer θ: by Parseval the
/// squared ℓ² norm of the coefficients of f·(z1 − z2)^θ.
pub fn hardy_torus_norm_sqr(theta: u32, f: &BiPoly) -> f64 {
    let g = f * &BiPoly::diag_power(theta);
    g.terms().map(|(_, c)| c.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bidisk::inverse_sigma;
    use crate::config::TruncationConfig;
    use crate::poly::parse_bipoly;
    use crate::specfun::{factorial, pochhammer};

    #[test]
    fn product_case_is_diagonal() {
        let p = BidiskParams::new(0.5, 1.5, 0.0, 0.0).unwrap();
        let g = gram_bidisk_exact(&p, 5).unwrap();
        for (d, b) in g.blocks.iter().enumerate() {
            let d = d as u32;
            for i in 0..=d {
                for j in 0..=d {
                    let v = b[(i as usize, j as usize)];
                    if i == j {
                        let e = factorial(i) / pochhammer(2.5, i) * factorial(d - i) / pochhammer(3.5, d - i);
                        assert!((v - e).abs() < 1e-15);
                    } else {
                        assert_eq!(v, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn lowest_blocks() {
        let g = gram_bidisk_exact(&BidiskParams::new(0.0, 0.0, 1.0, 0.0).unwrap(), 1).unwrap();
        assert!((g.blocks[0][(0, 0)] - 1.0).abs() < 1e-15);
        // ⟨z1, z2⟩ = −E|z1|² E|z2|² = −1/4; ‖z1‖² = E|z1|⁴ + E|z1|² E|z2|² = 1/3 + 1/4
        assert!((g.blocks[1][(1, 0)] + 0.25).abs() < 1e-15);
        assert!((g.blocks[1][(1, 1)] - 7.0 / 12.0).abs() < 1e-15);
        let f = gram_fock_exact(&FockParams::new(1.0, 1.0, 1.0).unwrap(), 0).unwrap();
        assert!((f.blocks[0][(0, 0)] - 2.0).abs() < 1e-15);
        let f = gram_fock_exact(&FockParams::new(1.0, 1.0, 0.0).unwrap(), 3).unwrap();
        assert!((f.blocks[3][(1, 1)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn d0_entry_is_inverse_sigma() {
        let cfg = TruncationConfig::default();
        for theta in 0..4 {
            let p = BidiskParams::new(0.3, 1.7, f64::from(theta), 0.0).unwrap();
            let g = gram_bidisk_exact(&p, 0).unwrap();
            let inv = inverse_sigma(&p, &cfg).unwrap();
            assert!((g.blocks[0][(0, 0)] - inv).abs() < 1e-13 * inv);
        }
    }

    #[test]
    fn rejects_non_integer_theta() {
        assert!(gram_bidisk_exact(&BidiskParams::new(0.0, 0.0, 0.5, 0.0).unwrap(), 2).is_err());
        assert!(gram_bidisk_exact(&BidiskParams::new(0.0, 0.0, 1.0, 0.5).unwrap(), 2).is_err());
        assert!(gram_bidisk_exact(&BidiskParams::new(0.0, 0.0, 1.0, 0.0).unwrap(), 10_000).is_err());
    }

    #[test]
    fn ball_norms() {
        let p = BallParams::new(0.0, 0.0, 0.0).unwrap();
        assert!((ball_monomial_norm_sqr(&p, 0, 0).unwrap() - 0.5).abs() < 1e-14);
        assert!((ball_monomial_norm_sqr(&p, 0, 1).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        let p = BallParams::new(0.5, 1.0, 0.25).unwrap();
        for n in 0..6 {
            let e = crate::ball::embed_const(&p, n).unwrap();
            let v = ball_monomial_norm_sqr(&p, 0, n).unwrap();
            assert!((v - e).abs() < 1e-13 * e, "{v} vs {e}");
        }
    }

    #[test]
    fn sphere_norm_is_limit_of_scaled_ball_norm() {
        let (beta, theta) = (0.4, 0.8);
        for (m, n) in [(0, 0), (2, 1), (1, 3), (4, 0)] {
            let surface = ball_hardy_monomial_norm_sqr(beta, theta, m, n).unwrap();
            let mut prev_err = f64::INFINITY;
            for eps in [1e-2, 1e-4, 1e-6] {
                let alpha = -1.0 + eps;
                let p = BallParams::new(alpha, beta, theta).unwrap();
                let scaled = (alpha + 1.0) * (alpha + 2.0) * ball_monomial_norm_sqr(&p, m, n).unwrap();
                let err = (scaled - surface).abs();
                assert!(err < prev_err);
                prev_err = err;
            }
            assert!(prev_err < 1e-5 * surface);
        }
    }

    #[test]
    fn torus_norms() {
        assert_eq!(hardy_torus_norm_sqr(0, &parse_bipoly("z1 - z2").unwrap()), 2.0);
        assert_eq!(hardy_torus_norm_sqr(1, &parse_bipoly("z1*z2").unwrap()), 2.0);
        assert_eq!(hardy_torus_norm_sqr(0, &BiPoly::one()), 1.0);
    }
}
