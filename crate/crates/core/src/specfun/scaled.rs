//! Complex numbers with an extra binary exponent, for products whose
//! factors under- or overflow separately.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Scaled {
    mant: Complex64,
    exp: i32,
}

fn pow2(k: i32) -> f64 {
    // exact for |k| ≤ 1000
    2f64.powi(k)
}

impl Scaled {
    pub(crate) fn new(v: Complex64) -> Self {
        Self { mant: v, exp: 0 }.normalized()
    }

    pub(crate) fn real(v: f64) -> Self {
        Self::new(Complex64::new(v, 0.0))
    }

    /// e^x, exact in the exponent range where e^x itself would not be representable.
    pub(crate) fn exp_real(x: f64) -> Self {
        let k = (x / std::f64::consts::LN_2).floor();
        Self { mant: Complex64::new((x - k * std::f64::consts::LN_2).exp(), 0.0), exp: k as i32 }.normalized()
    }

    fn normalized(self) -> Self {
        let a = self.mant.norm();
        if a == 0.0 || !a.is_finite() {
            return self;
        }
        let k = a.log2().floor() as i32;
        if k.abs() < 64 {
            return self;
        }
        Self { mant: self.mant * pow2(-k), exp: self.exp + k }
    }

    pub(crate) fn mul(self, other: Scaled) -> Self {
        Self { mant: self.mant * other.mant, exp: self.exp + other.exp }.normalized()
    }

    pub(crate) fn mul_c(self, z: Complex64) -> Self {
        Self { mant: self.mant * z, exp: self.exp }.normalized()
    }

    pub(crate) fn recip(self) -> Self {
        Self { mant: self.mant.inv(), exp: -self.exp }.normalized()
    }

    /// z^n by binary powering.
    pub(crate) fn powu(z: Complex64, n: u32) -> Self {
        let mut base = Self::new(z);
        let mut acc = Self::real(1.0);
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    pub(crate) fn to_c64(self) -> Complex64 {
        let e = self.exp;
        if e.abs() <= 1000 {
            return self.mant * pow2(e);
        }
        // split so neither factor is out of range by itself
        self.mant * pow2(e / 2) * pow2(e - e / 2)
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.to_c64().re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_beyond_the_exponent_range() {
        let big = Scaled::powu(Complex64::new(3.0, 4.0), 600);
        let small = Scaled::powu(Complex64::new(0.2, 0.0), 1000);
        let v = big.mul(small).to_c64();
        let expect = Complex64::from_polar((600.0 * 5f64.ln() + 1000.0 * 0.2f64.ln()).exp(), 600.0 * 4f64.atan2(3.0));
        assert!((v - expect).norm() < 1e-12 * expect.norm(), "{v} vs {expect}");
    }

    #[test]
    fn exp_real_and_recip() {
        let x = Scaled::exp_real(-900.0).mul(Scaled::exp_real(905.0)).to_f64();
        assert!((x - 5f64.exp()).abs() < 1e-12 * 5f64.exp());
        let r = Scaled::real(3.0e200).recip().mul(Scaled::real(6.0e200)).to_f64();
        assert!((r - 2.0).abs() < 1e-15);
    }

    #[test]
    fn underflow_rounds_to_zero() {
        assert_eq!(Scaled::powu(Complex64::new(1e-10, 0.0), 400).to_f64(), 0.0);
    }
}
