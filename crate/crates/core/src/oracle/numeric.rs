//! Gram blocks by quadrature, for parameters without a closed form.
//!
//! Rotation invariance reduces every entry to
//! ∫∫ r1^{p1} r2^{p2} A_k(r1, r2) dμ1(r1) dμ2(r2), where
//! A_k = (1/π) ∫_0^π cos(kφ) W(r1, r2, φ) dφ averages the weight over the
//! relative angle φ, p1 = m1+m2, p2 = n1+n2 and k = |m1 − m2|.

use nalgebra::DMatrix;

use super::quadrature::{integrate, Integral, Sample};
use super::{GramBlocks, SpaceParams, MAX_ORACLE_DEGREE};
use crate::bidisk::BidiskParams;
use crate::config::QuadratureConfig;
use crate::error::{domain, Error, Result};
use crate::fock::FockParams;
use crate::par::ExecMode;

/// One radial axis: either the disc measure (a+1)(1−r²)^a 2r dr on [0, 1],
/// or the Gaussian e^{−a r²} 2r dr truncated at `cutoff`.
#[derive(Debug, Clone, Copy)]
enum Radial {
    Disc { a: f64 },
    Gauss { a: f64, cutoff: f64 },
}

/// A parametrization u ↦ (r, density) of part of a radial axis.
#[derive(Debug, Clone, Copy)]
enum Chart {
    /// r = u with the measure's density.
    Plain(Radial),
    /// u = (1 − r²)^{a+1}, which makes the disc measure du (flat) and
    /// removes the boundary singularity of (1 − r²)^a.
    Flattened { a: f64 },
}

const SWITCH: f64 = 0.5;

impl Chart {
    fn point(&self, u: f64) -> (f64, f64) {
        match *self {
            Chart::Plain(Radial::Disc { a }) => (u, (a + 1.0) * (1.0 - u * u).powf(a) * 2.0 * u),
            Chart::Plain(Radial::Gauss { a, .. }) => (u, (-a * u * u).exp() * 2.0 * u),
            Chart::Flattened { a } => ((1.0 - u.powf(1.0 / (a + 1.0))).max(0.0).sqrt(), 1.0),
        }
    }
}

/// Splits [lo, hi] (in r) into charted segments (chart, u0, u1).
fn segments(radial: Radial, lo: f64, hi: f64) -> Vec<(Chart, f64, f64)> {
    let mut out = Vec::new();
    match radial {
        Radial::Disc { a } => {
            let flat = |r: f64| (1.0 - r * r).powf(a + 1.0);
            if lo < SWITCH {
                out.push((Chart::Plain(radial), lo, hi.min(SWITCH)));
            }
            if hi > SWITCH {
                // u decreases as r increases; integrate over increasing u
                out.push((Chart::Flattened { a }, flat(hi), flat(lo.max(SWITCH))));
            }
        }
        Radial::Gauss { cutoff, .. } => {
            if lo < cutoff {
                out.push((Chart::Plain(radial), lo, hi.min(cutoff)));
            }
        }
    }
    out.retain(|s| s.2 > s.1);
    out
}

/// Relative-angle weight W(r1, r2, φ) = |z1 − z2|^{2θ} |1 − z̄2 z1|^{2ϑ}.
#[derive(Debug, Clone, Copy)]
struct AngularWeight {
    theta: f64,
    vartheta: f64,
}

impl AngularWeight {
    fn eval(&self, r1: f64, r2: f64, phi: f64) -> f64 {
        let c = phi.cos();
        let mut w = 1.0;
        if self.theta != 0.0 {
            w *= (r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * c).max(0.0).powf(self.theta);
        }
        if self.vartheta != 0.0 {
            let p = r1 * r2;
            w *= (1.0 + p * p - 2.0 * p * c).powf(self.vartheta);
        }
        w
    }

    /// A_k for k = 0..=kmax in closed form when θ is a small nonnegative
    /// integer and p = r1 r2 ≤ FOURIER_MAX_P: |r1 − r2 e^{iφ}|^{2θ} is then a
    /// trigonometric polynomial, and |1 − p e^{iφ}|^{2ϑ} has Fourier
    /// coefficients Σ_j b_j b_{j+m} with b_j = C(ϑ, j)(−p)^j.
    fn fourier(&self, r1: f64, r2: f64, kmax: usize) -> Option<Integral> {
        let theta = self.theta;
        if theta < 0.0 || theta.fract() != 0.0 || theta > 64.0 {
            return None;
        }
        let t = theta as usize;
        let p = r1 * r2;
        if self.vartheta != 0.0 && p > FOURIER_MAX_P {
            return None;
        }
        // coefficients of (r1 − r2 e^{iφ})^θ and of its squared modulus
        let mut a = vec![0.0; t + 1];
        let mut binom = 1.0;
        for (j, aj) in a.iter_mut().enumerate() {
            *aj = binom * r1.powi((t - j) as i32) * (-r2).powi(j as i32);
            binom *= (theta - j as f64) / (j as f64 + 1.0);
        }
        let tm: Vec<f64> = (0..=t).map(|m| (0..=t - m).map(|j| a[j] * a[j + m]).sum()).collect();

        let width = kmax + t;
        let (g, g_err) = if self.vartheta == 0.0 {
            let mut g = vec![0.0; width + 1];
            g[0] = 1.0;
            (g, 0.0)
        } else {
            let v = self.vartheta;
            let q = 1.0 - p * p;
            // b_j until the tail Σ_{j>J} |b_j b_{j+m}| ≤ |b_J|² / (1 − p²) is negligible;
            // past j > ϑ the |b_j| decrease by at least a factor p per step
            let mut b = vec![1.0];
            let mut c = 1.0;
            let mut j = 0usize;
            loop {
                c *= (v - j as f64) / (j as f64 + 1.0) * -p;
                j += 1;
                b.push(c);
                if j as f64 > v + 1.0 && c * c / q < 1e-18 {
                    break;
                }
            }
            let last = b.len() - 1;
            for k in 0..width {
                c *= (v - (last + k) as f64) / ((last + k) as f64 + 1.0) * -p;
                b.push(c);
            }
            let g: Vec<f64> = (0..=width).map(|m| (0..=last).map(|j| b[j] * b[j + m]).sum()).collect();
            (g, b[last] * b[last] / q)
        };
        let mut value = vec![0.0; kmax + 1];
        for (k, vk) in value.iter_mut().enumerate() {
            for m in -(t as i64)..=(t as i64) {
                *vk += tm[m.unsigned_abs() as usize] * g[(k as i64 - m).unsigned_abs() as usize];
            }
        }
        let t_abs: f64 = tm.iter().map(|x| x.abs()).sum::<f64>() * 2.0;
        let error = t_abs * g_err + 8.0 * f64::EPSILON * value.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Some(Integral { value, error, converged: true, evaluations: 0 })
    }
}

/// Above this r1 r2 the binomial series of |1 − p e^{iφ}|^{2ϑ} is too long
/// and the angular integral is done by quadrature.
const FOURIER_MAX_P: f64 = 0.98;

/// Index of every Gram entry that must be integrated: (block, i, j) with
/// i ≤ j, and its exponents.
struct EntryTable {
    entries: Vec<(usize, usize, usize)>,
    p1: Vec<i32>,
    p2: Vec<i32>,
    k: Vec<usize>,
    max_k: usize,
    max_p: i32,
}

impl EntryTable {
    fn new(max_degree: usize) -> Self {
        let mut t = EntryTable { entries: vec![], p1: vec![], p2: vec![], k: vec![], max_k: max_degree, max_p: 0 };
        for d in 0..=max_degree {
            for i in 0..=d {
                for j in i..=d {
                    t.entries.push((d, i, j));
                    t.p1.push((i + j) as i32);
                    t.p2.push((2 * d - i - j) as i32);
                    t.k.push(j - i);
                }
            }
        }
        t.max_p = 2 * max_degree as i32;
        t
    }

    fn len(&self) -> usize {
        self.entries.len()
    }
}

struct Problem {
    mu1: Radial,
    mu2: Radial,
    weight: AngularWeight,
    table: EntryTable,
    cfg: QuadratureConfig,
    mode: ExecMode,
}

impl Problem {
    /// Tolerances per level: the angular and inner radial integrals are run
    /// tighter so that their committed error leaves room for the outer one.
    fn tolerances(&self) -> (f64, f64, f64) {
        let t = self.cfg.tolerance;
        (0.5 * t, 0.2 * t, 0.05 * t)
    }

    /// A_k(r1, r2) for k = 0..=max_k.
    fn angular(&self, r1: f64, r2: f64, tol: f64) -> Integral {
        let kmax = self.table.max_k;
        if let Some(exact) = self.weight.fourier(r1, r2, kmax) {
            return exact;
        }
        let w = self.weight;
        let f = move |phi: f64| {
            let base = w.eval(r1, r2, phi) / std::f64::consts::PI;
            Sample { value: (0..=kmax).map(|k| base * (k as f64 * phi).cos()).collect(), error: 0.0 }
        };
        integrate(f, 0.0, std::f64::consts::PI, kmax + 1, tol, self.cfg.max_subdivisions, ExecMode::Sequential)
    }

    /// ∫ over r2 of r2^{p2} A_k(r1, r2) dμ2, split at r2 = r1 where the
    /// angular average is not smooth.
    fn inner(&self, r1: f64, tol_inner: f64, tol_angle: f64) -> Sample {
        let len = self.table.len();
        let mut value = vec![0.0; len];
        let mut error = 0.0;
        let upper = match self.mu2 {
            Radial::Disc { .. } => 1.0,
            Radial::Gauss { cutoff, .. } => cutoff,
        };
        let pieces: Vec<(f64, f64)> = if r1 > 0.0 && r1 < upper { vec![(0.0, r1), (r1, upper)] } else { vec![(0.0, upper)] };
        let all: Vec<_> = pieces.iter().flat_map(|&(lo, hi)| segments(self.mu2, lo, hi)).collect();
        let share = all.len().max(1) as f64;
        for (chart, u0, u1) in all {
            let f = |u: f64| {
                let (r2, dens) = chart.point(u);
                let ang = self.angular(r1, r2, tol_angle);
                let mut pw = vec![1.0; self.table.max_p as usize + 1];
                for p in 1..pw.len() {
                    pw[p] = pw[p - 1] * r2;
                }
                let value = (0..len).map(|e| dens * pw[self.table.p2[e] as usize] * ang.value[self.table.k[e]]).collect();
                Sample { value, error: dens * ang.error }
            };
            let r = integrate(f, u0, u1, len, tol_inner / share, self.cfg.max_subdivisions, ExecMode::Sequential);
            for (v, x) in value.iter_mut().zip(&r.value) {
                *v += x;
            }
            error += r.error;
        }
        Sample { value, error }
    }

    fn solve(&self) -> Integral {
        let len = self.table.len();
        let (tol_outer, tol_inner, tol_angle) = self.tolerances();
        let upper = match self.mu1 {
            Radial::Disc { .. } => 1.0,
            Radial::Gauss { cutoff, .. } => cutoff,
        };
        let segs = segments(self.mu1, 0.0, upper);
        let share = segs.len().max(1) as f64;
        let mut value = vec![0.0; len];
        let mut error = 0.0;
        let mut converged = true;
        let mut evaluations = 0;
        for (chart, u0, u1) in segs {
            let f = |u: f64| {
                let (r1, dens) = chart.point(u);
                let inner = self.inner(r1, tol_inner, tol_angle);
                let mut pw = vec![1.0; self.table.max_p as usize + 1];
                for p in 1..pw.len() {
                    pw[p] = pw[p - 1] * r1;
                }
                let value = (0..len).map(|e| dens * pw[self.table.p1[e] as usize] * inner.value[e]).collect();
                Sample { value, error: dens * inner.error }
            };
            let r = integrate(f, u0, u1, len, tol_outer / share, self.cfg.max_subdivisions, self.mode);
            for (v, x) in value.iter_mut().zip(&r.value) {
                *v += x;
            }
            error += r.error;
            converged &= r.converged;
            evaluations += r.evaluations;
        }
        Integral { value, error, converged, evaluations }
    }

    fn to_blocks(&self, integral: &Integral, max_degree: usize) -> Vec<DMatrix<f64>> {
        let mut blocks: Vec<DMatrix<f64>> = (0..=max_degree).map(|d| DMatrix::zeros(d + 1, d + 1)).collect();
        for (e, &(d, i, j)) in self.table.entries.iter().enumerate() {
            blocks[d][(i, j)] = integral.value[e];
            blocks[d][(j, i)] = integral.value[e];
        }
        blocks
    }
}

/// Radius beyond which the Gaussian tail of every entry is negligible.
fn gauss_cutoff(a: f64, max_power: f64, tol: f64) -> f64 {
    // ∫_R^∞ r^q e^{−a r²} 2r dr ≤ tol/1000 with q covering monomials and |z1−z2|^{2θ}
    let target = -(tol * 1e-3).ln();
    let mut r2 = target / a;
    for _ in 0..50 {
        r2 = (target + (0.5 * max_power + 1.0) * r2.max(1.0).ln()) / a;
    }
    r2.sqrt()
}

/// Which space `gram_numeric` should integrate.
#[derive(Debug, Clone, Copy)]
pub enum NumericSpace {
    Bidisk(BidiskParams),
    Fock(FockParams),
}

/// Gram blocks by nested adaptive quadrature; the attached error estimate
/// bounds every entry. Fails if the requested tolerance is not reached.
pub fn gram_numeric(space: NumericSpace, max_degree: usize, cfg: &QuadratureConfig, mode: ExecMode) -> Result<GramBlocks> {
    if max_degree > MAX_ORACLE_DEGREE {
        return domain(format!("oracle degree {max_degree} exceeds the cap {MAX_ORACLE_DEGREE}"));
    }
    let table = EntryTable::new(max_degree);
    let (mu1, mu2, weight, params) = match space {
        NumericSpace::Bidisk(p) => {
            p.validate()?;
            (
                Radial::Disc { a: p.alpha },
                Radial::Disc { a: p.beta },
                AngularWeight { theta: p.theta, vartheta: p.vartheta },
                SpaceParams::Bidisk(p),
            )
        }
        NumericSpace::Fock(p) => {
            p.validate()?;
            let q = 2.0 * max_degree as f64 + 2.0 * p.theta.max(0.0) + 2.0;
            // (r1 + r2)^{2θ} ≤ 2^{2θ}(r1^{2θ} + r2^{2θ}) is covered by the power q
            let cut = |a: f64| gauss_cutoff(a, q, cfg.tolerance);
            (
                Radial::Gauss { a: p.alpha, cutoff: cut(p.alpha) },
                Radial::Gauss { a: p.beta, cutoff: cut(p.beta) },
                AngularWeight { theta: p.theta, vartheta: 0.0 },
                SpaceParams::Fock(p),
            )
        }
    };
    let problem = Problem { mu1, mu2, weight, table, cfg: *cfg, mode };
    let integral = problem.solve();
    if !integral.converged {
        let worst = problem
            .table
            .entries
            .iter()
            .max_by_key(|e| e.0)
            .map(|&(d, i, j)| format!("block {d}, entry ({i}, {j})"))
            .unwrap_or_default();
        return Err(Error::Quadrature { entry: worst, error: integral.error });
    }
    let blocks = problem.to_blocks(&integral, max_degree);
    Ok(GramBlocks::new(params, blocks, false, integral.error))
}
