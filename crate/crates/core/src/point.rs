use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point (z1, z2) of ℂ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Point2 {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub fn real(x1: f64, x2: f64) -> Self {
        Self::new(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0))
    }

    pub fn origin() -> Self {
        Self::real(0.0, 0.0)
    }

    /// Both coordinates strictly inside the unit disk.
    pub fn in_bidisk(&self) -> bool {
        self.z1.norm() < 1.0 && self.z2.norm() < 1.0
    }

    /// |z1|² + |z2|² < 1.
    pub fn in_ball(&self) -> bool {
        self.z1.norm_sqr() + self.z2.norm_sqr() < 1.0
    }

    /// Σ z_i w̄_i.
    pub fn inner(&self, w: &Point2) -> Complex64 {
        self.z1 * w.z1.conj() + self.z2 * w.z2.conj()
    }

    pub fn conj(&self) -> Point2 {
        Point2::new(self.z1.conj(), self.z2.conj())
    }

    /// z1 − z2, the defining function of the diagonal.
    pub fn diag_gap(&self) -> Complex64 {
        self.z1 - self.z2
    }
}
