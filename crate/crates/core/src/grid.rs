//! Kernel evaluation over many points at once.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ball::BallSpace;
use crate::bidisk::BidiskSpace;
use crate::error::Result;
use crate::fock::FockSpace;
use crate::par::{try_map_indexed, ExecMode};
use crate::point::Point2;
use crate::specfun::SeriesResult;

/// Anything that can evaluate a reproducing kernel K(z, w).
pub trait ReproducingKernel: Sync {
    fn kernel(&self, z: &Point2, w: &Point2) -> Result<SeriesResult>;
}

impl ReproducingKernel for BidiskSpace {
    fn kernel(&self, z: &Point2, w: &Point2) -> Result<SeriesResult> {
        self.full_kernel(z, w)
    }
}

impl ReproducingKernel for BallSpace {
    fn kernel(&self, z: &Point2, w: &Point2) -> Result<SeriesResult> {
        self.full_kernel(z, w)
    }
}

impl ReproducingKernel for FockSpace {
    fn kernel(&self, z: &Point2, w: &Point2) -> Result<SeriesResult> {
        self.full_kernel(z, w)
    }
}

/// K(z, w) for every pair, in input order.
pub fn kernel_values<K: ReproducingKernel>(k: &K, pairs: &[(Point2, Point2)], mode: ExecMode) -> Result<Vec<SeriesResult>> {
    try_map_indexed(mode, pairs.len(), |i| k.kernel(&pairs[i].0, &pairs[i].1))
}

/// The matrix [K(z_i, z_j)].
pub fn kernel_matrix<K: ReproducingKernel>(k: &K, points: &[Point2], mode: ExecMode) -> Result<DMatrix<Complex64>> {
    let n = points.len();
    let values = try_map_indexed(mode, n * n, |idx| k.kernel(&points[idx / n], &points[idx % n]))?;
    Ok(DMatrix::from_fn(n, n, |i, j| values[i * n + j].value))
}

/// max |M − M*| relative to max |M|.
pub fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}

/// (smallest, largest) eigenvalue of the Hermitian part of m.
pub fn eigen_range(m: &DMatrix<Complex64>) -> (f64, f64) {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigenvalues();
    eig.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}
