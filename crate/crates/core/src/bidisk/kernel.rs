use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{BidiskParams, SigmaTable};
use crate::config::{SmallTermRun, TruncationConfig};
use crate::disk::bergman_monomial_norm_sqr;
use crate::error::{domain, Error, Result};
use crate::point::Point2;
use crate::specfun::scaled::Scaled;
use crate::specfun::{binomial, pochhammer, SeriesResult};

fn check_point(z: &Point2) -> Result<()> {
    if !z.in_bidisk() {
        return domain(format!(
            "point ({}, {}) lies outside the open bidisk (moduli {:.6}, {:.6})",
            z.z1,
            z.z2,
            z.z1.norm(),
            z.z2.norm()
        ));
    }
    Ok(())
}

fn neg_power(base: Complex64, exponent: f64) -> Complex64 {
    base.powf(-exponent)
}

/// A bidisk space with its σ-constants cached, for repeated kernel evaluation.
#[derive(Debug)]
pub struct BidiskSpace {
    params: BidiskParams,
    cfg: TruncationConfig,
    sigmas: SigmaTable,
}

impl BidiskSpace {
    pub fn new(params: BidiskParams, cfg: TruncationConfig) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, cfg, sigmas: SigmaTable::new(params, cfg)? })
    }

    pub fn params(&self) -> &BidiskParams {
        &self.params
    }

    pub fn config(&self) -> &TruncationConfig {
        &self.cfg
    }

    /// σ(α, β, θ + n, ϑ).
    pub fn sigma(&self, n: u32) -> Result<f64> {
        self.sigmas.get(n)
    }

    /// Kernel restricted to w = (w1, w1), in closed form.
    pub fn diag_kernel(&self, z: &Point2, w1: Complex64) -> Result<Complex64> {
        check_point(z)?;
        check_point(&Point2::new(w1, w1))?;
        let wc = w1.conj();
        let one = Complex64::new(1.0, 0.0);
        Ok(self.sigma(0)?
            * neg_power(one - wc * z.z1, self.params.a())
            * neg_power(one - wc * z.z2, self.params.b()))
    }

    /// Reproducing kernel of the summand of vanishing order exactly `n`.
    pub fn q_kernel(&self, n: u32, z: &Point2, w: &Point2) -> Result<SeriesResult> {
        check_point(z)?;
        check_point(w)?;
        let pref = self.prefactor(n, z.diag_gap() * w.diag_gap().conj())?;
        if pref == Complex64::new(0.0, 0.0) {
            return Ok(SeriesResult { value: pref, terms_used: 1, tail_bound: 0.0 });
        }
        let inner = self.inner_sums(n, z, w, 0.1 * self.cfg.tolerance)?;
        Ok(SeriesResult { value: pref * inner.zw, terms_used: inner.terms, tail_bound: pref.norm() * inner.tail })
    }

    /// Full kernel as the series Σ_N Q_N over orders of vanishing.
    pub fn full_kernel(&self, z: &Point2, w: &Point2) -> Result<SeriesResult> {
        check_point(z)?;
        check_point(w)?;
        let tol = self.cfg.tolerance;
        let gap = z.diag_gap() * w.diag_gap().conj();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut inner_tail = 0.0;
        let mut terms = 0usize;
        let mut run = SmallTermRun::new(&self.cfg);
        let mut prev_bound = f64::INFINITY;
        // K(z, w) can be far smaller than sqrt(K(z, z) K(w, w)), the scale the
        // inner sums are controlled against
        let inner_rel = (1e-4 * tol).max(f64::EPSILON);
        for n in 0..self.cfg.max_outer_terms as u32 {
            if n > 0 && gap == Complex64::new(0.0, 0.0) {
                return Ok(SeriesResult { value: sum, terms_used: terms, tail_bound: inner_tail });
            }
            let pref = self.prefactor(n, gap)?;
            let inner = self.inner_sums(n, z, w, inner_rel)?;
            sum += pref * inner.zw;
            inner_tail += pref.norm() * inner.tail;
            terms += inner.terms;
            // |Q_N(z, w)| ≤ sqrt(Q_N(z, z) Q_N(w, w))
            let bound = pref.norm() * (inner.zz * inner.ww).sqrt();
            if n > 0 && bound == 0.0 {
                return Ok(SeriesResult { value: sum, terms_used: terms, tail_bound: inner_tail });
            }
            if !bound.is_finite() {
                return Err(Error::NonConvergence {
                    what: format!("bidisk kernel series: Cauchy-Schwarz bound overflowed at order {n}"),
                    terms,
                    tail: f64::INFINITY,
                });
            }
            let scale = sum.norm().max(1.0);
            let small = run.observe(bound, sum.norm(), tol);
            let ratio = bound / prev_bound;
            prev_bound = bound;
            // the inner sums carry their own relative accuracy; only the
            // outer truncation is tested here
            if small && ratio < 1.0 {
                let outer_tail = bound * ratio / (1.0 - ratio);
                if outer_tail <= tol * scale {
                    return Ok(SeriesResult { value: sum, terms_used: terms, tail_bound: outer_tail + inner_tail });
                }
            }
        }
        Err(Error::NonConvergence {
            what: "bidisk kernel series over the vanishing order".into(),
            terms: self.cfg.max_outer_terms,
            tail: prev_bound,
        })
    }

    /// σ_N g^N; σ_N underflows and |g|^N overflows for large N.
    fn prefactor(&self, n: u32, gap: Complex64) -> Result<Complex64> {
        Ok(self.sigmas.scaled(n)?.mul(Scaled::powu(gap, n)).to_c64())
    }

    /// Σ_n n!/(s_N+2)_n c_n(z) c̄_n(w) together with the diagonal sums
    /// at (z, z) and (w, w), where c_n are the Taylor coefficients of
    /// t ↦ (1 − t z1)^{−a−N}(1 − t z2)^{−b−N}.
    fn inner_sums(&self, order: u32, z: &Point2, w: &Point2, rel: f64) -> Result<InnerSums> {
        let nf = f64::from(order);
        let ap = self.params.a() + nf;
        let bp = self.params.b() + nf;
        let sp = self.params.s() + 2.0 * nf;
        let rho_z = z.z1.norm().max(z.z2.norm()).powi(2);
        let rho_w = w.z1.norm().max(w.z2.norm()).powi(2);

        let mut cz = CoeffRecurrence::new(ap, bp, z);
        let mut cw = CoeffRecurrence::new(ap, bp, w);
        let mut weight = 1.0;
        let mut out = InnerSums { zw: Complex64::new(1.0, 0.0), zz: 1.0, ww: 1.0, terms: 1, tail: 0.0 };
        let (mut tz_prev, mut tw_prev) = (1.0, 1.0);
        let (mut pz_prev, mut pw_prev) = (f64::INFINITY, f64::INFINITY);
        let mut run = SmallTermRun::new(&self.cfg);
        for n in 0..self.cfg.max_terms {
            let (vz, vw) = (cz.next(), cw.next());
            weight *= (n as f64 + 1.0) / (sp + 2.0 + n as f64);
            let tz = weight * vz.norm_sqr();
            let tw = weight * vw.norm_sqr();
            out.zw += weight * vz * vw.conj();
            out.zz += tz;
            out.ww += tw;
            out.terms += 1;

            let (pz, pw) = (tz + tz_prev, tw + tw_prev);
            let tail_z = geometric_tail(pz, pz_prev, rho_z);
            let tail_w = geometric_tail(pw, pw_prev, rho_w);
            (tz_prev, tw_prev, pz_prev, pw_prev) = (tz, tw, pz, pw);

            let scale = (out.zz * out.ww).sqrt();
            let small = run.observe((tz * tw).sqrt(), scale, rel);
            let tail = (tail_z * tail_w).sqrt();
            if small && tail <= rel * scale {
                out.tail = tail;
                return Ok(out);
            }
        }
        Err(Error::NonConvergence {
            what: format!("bidisk inner series (order {order})"),
            terms: self.cfg.max_terms,
            tail: f64::NAN,
        })
    }

    /// Taylor blocks of the kernel: for each total degree d ≤ `max_degree` a
    /// symmetric (d+1)×(d+1) matrix K with
    /// P(z, w) = Σ_d Σ_{i,j} K[i][j] z1^i z2^{d−i} w̄1^j w̄2^{d−j}.
    pub fn taylor_blocks(&self, max_degree: usize) -> Result<Vec<DMatrix<f64>>> {
        let mut blocks = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree as u32 {
            let mut k = DMatrix::<f64>::zeros(d as usize + 1, d as usize + 1);
            for order in 0..=d {
                let n = d - order;
                let of = f64::from(order);
                let (ap, bp) = (self.params.a() + of, self.params.b() + of);
                let c: Vec<f64> = (0..=n)
                    .map(|j| pochhammer(ap, j) / crate::specfun::factorial(j) * pochhammer(bp, n - j)
                        / crate::specfun::factorial(n - j))
                    .collect();
                let u = times_diag_power(&c, order);
                let coef = self.sigma(order)? * bergman_monomial_norm_sqr(self.params.s() + 2.0 * of, n);
                let u = nalgebra::DVector::from_vec(u);
                k += coef * &u * u.transpose();
            }
            blocks.push(k);
        }
        Ok(blocks)
    }
}

/// Coefficients (indexed by the power of z1) of (z1 − z2)^order · Σ c_j z1^j z2^{n−j}.
fn times_diag_power(c: &[f64], order: u32) -> Vec<f64> {
    let mut out = vec![0.0; c.len() + order as usize];
    for i in 0..=order {
        let d = if (order - i).is_multiple_of(2) { 1.0 } else { -1.0 } * binomial(order, i);
        for (j, &cj) in c.iter().enumerate() {
            out[i as usize + j] += d * cj;
        }
    }
    out
}

/// Estimated remainder of a nonnegative series whose pair sums p_n decay
/// geometrically with limiting ratio `rho`.
fn geometric_tail(p: f64, p_prev: f64, rho: f64) -> f64 {
    if p == 0.0 {
        // two consecutive zero coefficients: the recurrence stays at zero
        return 0.0;
    }
    let r = (p / p_prev).max(rho);
    if r >= 1.0 {
        f64::INFINITY
    } else {
        p * r / (1.0 - r)
    }
}

struct InnerSums {
    zw: Complex64,
    zz: f64,
    ww: f64,
    terms: usize,
    tail: f64,
}

/// Three-term recurrence for the coefficients c_n, n ≥ 1, of
/// (1 − t z1)^{−a}(1 − t z2)^{−b}:
/// (n+1) c_{n+1} = (n(z1+z2) + a z1 + b z2) c_n − (n − 1 + a + b) z1 z2 c_{n−1}.
struct CoeffRecurrence {
    a: f64,
    b: f64,
    z1: Complex64,
    z2: Complex64,
    n: usize,
    prev: Complex64,
    cur: Complex64,
}

impl CoeffRecurrence {
    fn new(a: f64, b: f64, z: &Point2) -> Self {
        Self { a, b, z1: z.z1, z2: z.z2, n: 0, prev: Complex64::new(0.0, 0.0), cur: Complex64::new(1.0, 0.0) }
    }

    /// Advances to c_{n+1} and returns it.
    fn next(&mut self) -> Complex64 {
        let nf = self.n as f64;
        let lin = (self.z1 + self.z2) * nf + self.z1 * self.a + self.z2 * self.b;
        let quad = self.z1 * self.z2 * (nf - 1.0 + self.a + self.b);
        let next = (lin * self.cur - quad * self.prev) / (nf + 1.0);
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        next
    }
}

/// Diagonal kernel σ (1 − w̄1 z1)^{−a} (1 − w̄1 z2)^{−b}.
pub fn diag_kernel(params: &BidiskParams, z: &Point2, w1: Complex64, cfg: &TruncationConfig) -> Result<Complex64> {
    BidiskSpace::new(*params, *cfg)?.diag_kernel(z, w1)
}

pub fn q_kernel(params: &BidiskParams, n: u32, z: &Point2, w: &Point2, cfg: &TruncationConfig) -> Result<SeriesResult> {
    BidiskSpace::new(*params, *cfg)?.q_kernel(n, z, w)
}

pub fn full_kernel(params: &BidiskParams, z: &Point2, w: &Point2, cfg: &TruncationConfig) -> Result<SeriesResult> {
    BidiskSpace::new(*params, *cfg)?.full_kernel(z, w)
}

pub fn taylor_blocks(params: &BidiskParams, max_degree: usize, cfg: &TruncationConfig) -> Result<Vec<DMatrix<f64>>> {
    BidiskSpace::new(*params, *cfg)?.taylor_blocks(max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::factorial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn space(a: f64, b: f64, t: f64, v: f64) -> BidiskSpace {
        BidiskSpace::new(BidiskParams::new(a, b, t, v).unwrap(), TruncationConfig::default()).unwrap()
    }

    fn product_kernel(alpha: f64, beta: f64, z: &Point2, w: &Point2) -> Complex64 {
        let one = c(1.0, 0.0);
        (one - w.z1.conj() * z.z1).powf(-alpha - 2.0) * (one - w.z2.conj() * z.z2).powf(-beta - 2.0)
    }

    #[test]
    fn recurrence_matches_convolution() {
        let z = Point2::new(c(0.3, -0.4), c(-0.2, 0.5));
        let (a, b) = (2.7, 3.1);
        let mut rec = CoeffRecurrence::new(a, b, &z);
        for n in 1..30u32 {
            let direct: Complex64 = (0..=n)
                .map(|j| {
                    pochhammer(a, j) / factorial(j) * pochhammer(b, n - j) / factorial(n - j)
                        * z.z1.powu(j)
                        * z.z2.powu(n - j)
                })
                .sum();
            let v = rec.next();
            assert!((v - direct).norm() < 1e-12 * direct.norm().max(1e-3), "n={n}");
        }
    }

    #[test]
    fn diag_kernel_product_case() {
        let s = space(0.5, 1.5, 0.0, 0.0);
        let z = Point2::new(c(0.3, 0.1), c(-0.5, 0.2));
        let w1 = c(0.2, -0.6);
        let expected = product_kernel(0.5, 1.5, &z, &Point2::new(w1, w1));
        assert!((s.diag_kernel(&z, w1).unwrap() - expected).norm() < 1e-13);
        let at_origin = s.diag_kernel(&Point2::origin(), w1).unwrap();
        assert!((at_origin - c(s.sigma(0).unwrap(), 0.0)).norm() < 1e-15);
        assert!(s.diag_kernel(&Point2::real(1.0, 0.0), w1).is_err());
    }

    #[test]
    fn q0_on_diagonal_is_diag_kernel() {
        let s = space(0.3, -0.2, 0.7, 0.4);
        let z = Point2::new(c(0.4, 0.3), c(-0.1, 0.6));
        let lam = c(0.5, -0.2);
        let q = s.q_kernel(0, &z, &Point2::new(lam, lam)).unwrap();
        let d = s.diag_kernel(&z, lam).unwrap();
        assert!((q.value - d).norm() < 1e-11 * d.norm(), "{} vs {d}", q.value);
    }

    #[test]
    fn q0_at_origin() {
        let s = space(0.0, 0.0, 0.0, 0.0);
        let q = s.q_kernel(0, &Point2::origin(), &Point2::origin()).unwrap();
        assert!((q.value - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn full_kernel_product_case() {
        let s = space(0.5, 1.0, 0.0, 0.0);
        let z = Point2::new(c(0.5, 0.2), c(-0.3, 0.6));
        let w = Point2::new(c(-0.4, 0.1), c(0.2, -0.7));
        let k = s.full_kernel(&z, &w).unwrap();
        let expected = product_kernel(0.5, 1.0, &z, &w);
        assert!((k.value - expected).norm() < 1e-10 * expected.norm(), "{} vs {expected}", k.value);
        assert!(k.tail_bound <= 1e-12 * k.value.norm().max(1.0));
    }

    #[test]
    fn full_kernel_on_diagonal_is_diag_kernel() {
        let s = space(0.2, 0.6, 1.5, 0.5);
        let z = Point2::new(c(0.1, 0.2), c(0.3, -0.3));
        let lam = c(-0.3, 0.4);
        let k = s.full_kernel(&z, &Point2::new(lam, lam)).unwrap();
        assert!((k.value - s.diag_kernel(&z, lam).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn full_kernel_hermitian() {
        let s = space(0.0, 0.5, 1.0, 0.3);
        let z = Point2::new(c(0.6, 0.1), c(-0.2, -0.5));
        let w = Point2::new(c(0.1, -0.3), c(0.7, 0.2));
        let k1 = s.full_kernel(&z, &w).unwrap();
        let k2 = s.full_kernel(&w, &z).unwrap();
        assert!((k1.value - k2.value.conj()).norm() < 1e-11 * k1.value.norm().max(1.0));
    }

    #[test]
    fn taylor_blocks_product_case() {
        let (alpha, beta) = (0.5, 1.25);
        let blocks = space(alpha, beta, 0.0, 0.0).taylor_blocks(6).unwrap();
        for (d, k) in blocks.iter().enumerate() {
            let d = d as u32;
            let scale = k.abs().max();
            for i in 0..=d {
                for j in 0..=d {
                    let expected = if i == j {
                        pochhammer(alpha + 2.0, i) / factorial(i) * pochhammer(beta + 2.0, d - i) / factorial(d - i)
                    } else {
                        0.0
                    };
                    let got = k[(i as usize, j as usize)];
                    assert!((got - expected).abs() < 1e-12 * scale, "d={d} ({i},{j}) {got}");
                }
            }
        }
    }

    #[test]
    fn taylor_blocks_sum_to_kernel() {
        let s = space(0.3, 0.0, 2.0, 0.0);
        let z = Point2::new(c(0.2, 0.1), c(-0.15, 0.1));
        let w = Point2::new(c(0.1, -0.2), c(0.2, 0.05));
        let blocks = s.taylor_blocks(40).unwrap();
        let mut sum = c(0.0, 0.0);
        for (d, k) in blocks.iter().enumerate() {
            for i in 0..=d {
                for j in 0..=d {
                    sum += k[(i, j)]
                        * z.z1.powu(i as u32)
                        * z.z2.powu((d - i) as u32)
                        * w.z1.conj().powu(j as u32)
                        * w.z2.conj().powu((d - j) as u32);
                }
            }
        }
        let k = s.full_kernel(&z, &w).unwrap();
        assert!((sum - k.value).norm() < 1e-10, "{sum} vs {}", k.value);
    }
}
