//! Sparse polynomials in one and two complex variables.
//!
//! Coefficients are `Complex64`; all operations are exact in that arithmetic
//! (no truncation). Canonical form never stores a coefficient that is exactly
//! zero.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::point::Point2;
use crate::specfun::pochhammer;

pub use parse::parse_bipoly;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which variable a partial derivative acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z1,
    Z2,
}

/// Polynomial Σ c_m z^m in one variable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UniPoly {
    coeffs: BTreeMap<u32, Complex64>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_terms([(0, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, Complex64)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: u32, c: Complex64) {
        let entry = self.coeffs.entry(m).or_insert(ZERO);
        *entry += c;
        if *entry == ZERO {
            self.coeffs.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: u32) -> Complex64 {
        self.coeffs.get(&m).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.coeffs.iter().map(|(&m, &c)| (m, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(m, c)| (m, c * s)))
    }

    /// k-th derivative.
    pub fn derivative(&self, k: u32) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|&(m, _)| m >= k)
                .map(|(m, c)| (m - k, c * pochhammer(f64::from(m - k + 1), k))),
        )
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let Some(deg) = self.degree() else { return ZERO };
        (0..=deg).rev().fold(ZERO, |acc, m| acc * z + self.coeff(m))
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Σ |c_m|² · w(m) for a diagonal monomial weight.
    pub fn weighted_norm_sqr(&self, weight: impl Fn(u32) -> f64) -> f64 {
        self.terms().map(|(m, c)| c.norm_sqr() * weight(m)).sum()
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, c);
        }
        out
    }
}

/// Polynomial Σ c_{m,n} z1^m z2^n in two variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BiPoly {
    coeffs: BTreeMap<(u32, u32), Complex64>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn monomial(c: Complex64, m: u32, n: u32) -> Self {
        Self::from_terms([((m, n), c)])
    }

    pub fn z1() -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), 1, 0)
    }

    pub fn z2() -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), 0, 1)
    }

    /// (z1 − z2)^k.
    pub fn diag_power(k: u32) -> Self {
        Self::from_terms((0..=k).map(|j| {
            let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            ((j, k - j), Complex64::new(sign * crate::specfun::binomial(k, j), 0.0))
        }))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Complex64)>) -> Self {
        let mut p = Self::zero();
        for (key, c) in terms {
            p.add_term(key, c);
        }
        p
    }

    fn add_term(&mut self, key: (u32, u32), c: Complex64) {
        let entry = self.coeffs.entry(key).or_insert(ZERO);
        *entry += c;
        if *entry == ZERO {
            self.coeffs.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: u32, n: u32) -> Complex64 {
        self.coeffs.get(&(m, n)).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(m, n)| m + n).max()
    }

    /// Largest exponent of the given variable.
    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.coeffs
            .keys()
            .map(|&(m, n)| match var {
                Var::Z1 => m,
                Var::Z2 => n,
            })
            .max()
    }

    /// Part of total degree exactly `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        Self::from_terms(self.terms().filter(|&((m, n), _)| m + n == d))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c * s)))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// ∂^order in the chosen variable.
    pub fn differentiate(&self, var: Var, order: u32) -> Self {
        Self::from_terms(self.terms().filter_map(|((m, n), c)| match var {
            Var::Z1 if m >= order => Some(((m - order, n), c * pochhammer(f64::from(m - order + 1), order))),
            Var::Z2 if n >= order => Some(((m, n - order), c * pochhammer(f64::from(n - order + 1), order))),
            _ => None,
        }))
    }

    /// f ↦ f(z, z).
    pub fn restrict_diagonal(&self) -> UniPoly {
        UniPoly::from_terms(self.terms().map(|((m, n), c)| (m + n, c)))
    }

    /// f ↦ f(z, 0), as a polynomial in z1.
    pub fn restrict_z2_zero(&self) -> UniPoly {
        UniPoly::from_terms(self.terms().filter(|&((_, n), _)| n == 0).map(|((m, _), c)| (m, c)))
    }

    /// Exact quotient q with (z1 − z2)^order · q = self.
    ///
    /// Division is done one factor at a time, degree by degree; each step
    /// requires the diagonal restriction to vanish, up to rounding in the
    /// recurrence, and reports that restriction otherwise.
    pub fn divide_diag_power(&self, order: u32) -> Result<BiPoly> {
        let mut current = self.clone();
        for step in 0..order {
            let mut quotient = BiPoly::zero();
            let mut remainder = UniPoly::zero();
            let Some(deg) = current.degree() else { return Ok(current) };
            for d in 0..=deg {
                // c_m are coefficients of z1^m z2^{d-m}; q_m = q_{m-1} - c_m
                let mut q = ZERO;
                let mut scale = 0.0f64;
                for m in 0..d {
                    let c = current.coeff(m, d - m);
                    scale = scale.max(c.norm());
                    q -= c;
                    quotient.add_term((m, d - 1 - m), q);
                }
                let top = current.coeff(d, 0);
                scale = scale.max(top.norm());
                let rem = top - q;
                if rem.norm() > 64.0 * f64::EPSILON * f64::from(d + 1) * scale {
                    remainder.add_term(d, rem);
                }
            }
            if !remainder.is_zero() {
                return Err(Error::Divisibility { order: step + 1, remainder });
            }
            current = quotient;
        }
        Ok(current)
    }

    pub fn evaluate(&self, z: &Point2) -> Complex64 {
        let Some(deg) = self.degree() else { return ZERO };
        let mut p1 = Vec::with_capacity(deg as usize + 1);
        let mut p2 = Vec::with_capacity(deg as usize + 1);
        let (mut a, mut b) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        for _ in 0..=deg {
            p1.push(a);
            p2.push(b);
            a *= z.z1;
            b *= z.z2;
        }
        self.terms().map(|((m, n), c)| c * p1[m as usize] * p2[n as usize]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Entrywise comparison with an absolute tolerance.
    pub fn approx_eq(&self, other: &BiPoly, tol: f64) -> bool {
        let diff = self - other;
        diff.max_abs() <= tol
    }

    /// JSON wire form: array of `[m, n, re, im]`.
    pub fn to_json_terms(&self) -> Vec<(u32, u32, f64, f64)> {
        self.terms().map(|((m, n), c)| (m, n, c.re, c.im)).collect()
    }

    pub fn from_json_terms(terms: &[(u32, u32, f64, f64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(m, n, re, im)| ((m, n), Complex64::new(re, im))))
    }
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<(u32, u32, f64, f64)>::deserialize(deserializer)?;
        Ok(Self::from_json_terms(&terms))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, -c);
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((m1, n1), c1) in self.terms() {
            for ((m2, n2), c2) in rhs.terms() {
                out.add_term((m1 + m2, n1 + n2), c1 * c2);
            }
        }
        out
    }
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|((m, n), c)| {
                let mut s = fmt_coeff(c);
                if m > 0 {
                    s.push_str(&format!("*z1^{m}"));
                }
                if n > 0 {
                    s.push_str(&format!("*z2^{n}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| if m == 0 { fmt_coeff(c) } else { format!("{}*z^{m}", fmt_coeff(c)) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
