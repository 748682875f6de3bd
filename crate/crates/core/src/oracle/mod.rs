//! Independent ground truth: Gram matrices of monomials, block-diagonal by
//! total degree, and everything derived from them (kernel Taylor blocks,
//! orthogonal projections, norms).

mod exact;
mod montecarlo;
mod numeric;
mod quadrature;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ball::BallParams;
use crate::bidisk::BidiskParams;
use crate::error::{domain, Error, Result};
use crate::fock::FockParams;
use crate::point::Point2;
use crate::poly::BiPoly;

pub use exact::{
    ball_hardy_monomial_norm_sqr, ball_monomial_norm_sqr, ball_monomial_norms, gram_bidisk_exact, gram_fock_exact,
    hardy_torus_norm_sqr,
};
pub use montecarlo::{mc_inner_product, McEstimate};
pub use numeric::{gram_numeric, NumericSpace};

/// Largest total degree any oracle will build.
pub const MAX_ORACLE_DEGREE: usize = 40;

/// Largest condition number accepted when inverting a Gram block.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "lowercase")]
pub enum SpaceParams {
    Bidisk(BidiskParams),
    Ball(BallParams),
    Fock(FockParams),
}

/// Gram matrices ⟨z1^i z2^{d−i}, z1^j z2^{d−j}⟩ for d = 0..=max_degree.
/// Row and column index i is the exponent of z1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramBlocks {
    pub params: SpaceParams,
    pub max_degree: usize,
    /// True when the entries come from closed-form moments.
    pub exact: bool,
    /// Bound on the absolute error of every entry (0 when exact).
    pub error_estimate: f64,
    #[serde(with = "matrix_list")]
    pub blocks: Vec<DMatrix<f64>>,
}

mod matrix_list {
    use nalgebra::DMatrix;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(blocks: &[DMatrix<f64>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Vec<f64>>> = blocks
            .iter()
            .map(|m| m.row_iter().map(|r| r.iter().copied().collect()).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<DMatrix<f64>>, D::Error> {
        let rows = Vec::<Vec<Vec<f64>>>::deserialize(d)?;
        rows.into_iter()
            .enumerate()
            .map(|(deg, m)| {
                if m.len() != deg + 1 || m.iter().any(|r| r.len() != deg + 1) {
                    return Err(D::Error::custom(format!("block {deg} must be {0}x{0}", deg + 1)));
                }
                Ok(DMatrix::from_fn(deg + 1, deg + 1, |i, j| m[i][j]))
            })
            .collect()
    }
}

/// Coefficients of the degree-d part of f, indexed by the exponent of z1.
pub fn block_coeffs(f: &BiPoly, d: usize) -> Vec<Complex64> {
    (0..=d).map(|i| f.coeff(i as u32, (d - i) as u32)).collect()
}

fn monomials(z: &Point2, d: usize) -> Vec<Complex64> {
    (0..=d).map(|i| z.z1.powu(i as u32) * z.z2.powu((d - i) as u32)).collect()
}

impl GramBlocks {
    pub(crate) fn new(params: SpaceParams, blocks: Vec<DMatrix<f64>>, exact: bool, error_estimate: f64) -> Self {
        Self { params, max_degree: blocks.len().saturating_sub(1), exact, error_estimate, blocks }
    }

    fn check_degree(&self, f: &BiPoly) -> Result<()> {
        match f.degree() {
            Some(d) if d as usize > self.max_degree => {
                domain(format!("polynomial degree {d} exceeds the oracle degree {}", self.max_degree))
            }
            _ => Ok(()),
        }
    }

    /// ⟨f, g⟩ from the Gram blocks.
    pub fn inner(&self, f: &BiPoly, g: &BiPoly) -> Result<Complex64> {
        self.check_degree(f)?;
        self.check_degree(g)?;
        let mut s = Complex64::new(0.0, 0.0);
        for (d, block) in self.blocks.iter().enumerate() {
            let (a, b) = (block_coeffs(f, d), block_coeffs(g, d));
            for i in 0..=d {
                if a[i] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..=d {
                    s += a[i] * b[j].conj() * block[(i, j)];
                }
            }
        }
        Ok(s)
    }

    pub fn norm_sqr(&self, f: &BiPoly) -> Result<f64> {
        Ok(self.inner(f, f)?.re)
    }

    /// Largest deviation from symmetry over all blocks.
    pub fn asymmetry(&self) -> f64 {
        self.blocks.iter().map(|b| (b - b.transpose()).abs().max()).fold(0.0, f64::max)
    }
}

/// Largest / smallest eigenvalue of a symmetric block; infinite if not
/// positive definite.
pub fn condition_number(block: &DMatrix<f64>) -> f64 {
    let eig = block.clone().symmetric_eigenvalues();
    let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v.abs())));
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

fn invert(block: &DMatrix<f64>, degree: usize) -> Result<DMatrix<f64>> {
    let condition = condition_number(block);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::Conditioning { degree, condition });
    }
    let chol = block
        .clone()
        .cholesky()
        .ok_or(Error::Conditioning { degree, condition: f64::INFINITY })?;
    let inv = chol.inverse();
    Ok((&inv + inv.transpose()) * 0.5)
}

/// Kernel Taylor blocks K_d = G_d^{−1}. Because the Gram matrix is block
/// diagonal by degree, these are the exact Taylor coefficients of the kernel.
pub fn gram_kernel_blocks(gram: &GramBlocks) -> Result<Vec<DMatrix<f64>>> {
    gram.blocks.iter().enumerate().map(|(d, b)| invert(b, d)).collect()
}

/// Σ_d Σ_{i,j} K_d[i][j] z^{(i)} w̄^{(j)} for kernel blocks K.
pub fn kernel_from_blocks(blocks: &[DMatrix<f64>], z: &Point2, w: &Point2) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (d, k) in blocks.iter().enumerate() {
        let (zm, wm) = (monomials(z, d), monomials(&w.conj(), d));
        for i in 0..=d {
            for j in 0..=d {
                s += zm[i] * wm[j] * k[(i, j)];
            }
        }
    }
    s
}

/// ⟨f, K(·, w)⟩ computed from Gram blocks and kernel blocks; equals f(w)
/// when the kernel blocks are those of the same space.
pub fn reproduce(gram: &GramBlocks, kernel: &[DMatrix<f64>], f: &BiPoly, w: &Point2) -> Result<Complex64> {
    gram.check_degree(f)?;
    let mut s = Complex64::new(0.0, 0.0);
    for (d, (g, k)) in gram.blocks.iter().zip(kernel).enumerate() {
        let c = DVector::from_vec(block_coeffs(f, d));
        let wm = DVector::from_vec(monomials(w, d));
        let gk = (g * k).map(|x| Complex64::new(x, 0.0));
        s += (c.transpose() * gk * wm)[(0, 0)];
    }
    Ok(s)
}

/// Coefficient vectors (by z1 exponent) of (z1 − z2)^N z1^j z2^{d−N−j}.
fn divisible_basis(d: usize, order: usize) -> DMatrix<f64> {
    let cols = d + 1 - order;
    let diag = BiPoly::diag_power(order as u32);
    DMatrix::from_fn(d + 1, cols, |i, j| {
        // coefficient of z1^i in (z1 − z2)^N z1^j …
        if i < j || i - j > order {
            0.0
        } else {
            diag.coeff((i - j) as u32, (order - (i - j)) as u32).re
        }
    })
}

/// Orthogonal projection of f onto the polynomials divisible by (z1 − z2)^N.
pub fn project_divisible(gram: &GramBlocks, f: &BiPoly, order: u32) -> Result<BiPoly> {
    gram.check_degree(f)?;
    let n = order as usize;
    let mut out = BiPoly::zero();
    let max_d = f.degree().unwrap_or(0) as usize;
    for d in n..=max_d {
        let g = &gram.blocks[d];
        let b = divisible_basis(d, n);
        let normal = b.transpose() * g * &b;
        let chol = normal.clone().cholesky().ok_or(Error::Conditioning {
            degree: d,
            condition: condition_number(&normal),
        })?;
        let c = block_coeffs(f, d);
        let mut coeff = vec![Complex64::new(0.0, 0.0); d + 1];
        for part in 0..2 {
            let v = DVector::from_iterator(d + 1, c.iter().map(|z| if part == 0 { z.re } else { z.im }));
            let x = chol.solve(&(b.transpose() * g * v));
            let p = &b * x;
            for i in 0..=d {
                if part == 0 {
                    coeff[i].re = p[i];
                } else {
                    coeff[i].im = p[i];
                }
            }
        }
        out = &out + &BiPoly::from_terms(coeff.into_iter().enumerate().map(|(i, c)| ((i as u32, (d - i) as u32), c)));
    }
    Ok(out)
}

/// (P_N f, Q_N f) where P_N projects onto functions vanishing to order at
/// least N on the diagonal and Q_N = P_N − P_{N+1}.
pub fn project(gram: &GramBlocks, f: &BiPoly, order: u32) -> Result<(BiPoly, BiPoly)> {
    let p = project_divisible(gram, f, order)?;
    let next = project_divisible(gram, f, order + 1)?;
    let q = &p - &next;
    Ok((p, q))
}
