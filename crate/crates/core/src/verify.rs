//! Seeded verification suites. Every check compares a computation with an
//! independent oracle (exact Gram moments, quadrature, closed forms or a
//! second evaluation route) at a fixed tolerance.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ball::{ball_full_kernel, ball_full_kernel_series, ball_norm_expansion, BallParams, BallSpace};
use crate::bidisk::{
    delta_sum, full_kernel, hardy_norm_expansion, inverse_sigma, norm_expansion, sigma, sigma_closed_form,
    taylor_blocks, BidiskParams, BidiskSpace,
};
use crate::config::{QuadratureConfig, TruncationConfig};
use crate::error::{Error, Result};
use crate::fock::{fock_cov_kernel, fock_delta_sum, fock_full_kernel, fock_norm_expansion, FockParams, FockSpace};
use crate::grid::{eigen_range, hermitian_defect, kernel_matrix, ReproducingKernel};
use crate::oracle::{
    ball_monomial_norms, gram_bidisk_exact, gram_fock_exact, gram_kernel_blocks, gram_numeric, hardy_torus_norm_sqr,
    project, NumericSpace,
};
use crate::par::{try_map_indexed, ExecMode};
use crate::point::Point2;
use crate::poly::BiPoly;
use crate::report::Check;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub mode: ExecMode,
    pub truncation: TruncationConfig,
    pub quadrature: QuadratureConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 7,
            mode: ExecMode::default(),
            truncation: TruncationConfig::default(),
            quadrature: QuadratureConfig::default(),
        }
    }
}

/// One family of checks with a single tolerance regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    SigmaClosedForm,
    SigmaIntegral,
    TaylorBlocks,
    ProductKernel,
    BidiskNorm,
    Hardy,
    Ball,
    FockCov,
    Structure,
    Delta,
}

impl Group {
    pub const ALL: [Group; 10] = [
        Group::SigmaClosedForm,
        Group::SigmaIntegral,
        Group::TaylorBlocks,
        Group::ProductKernel,
        Group::BidiskNorm,
        Group::Hardy,
        Group::Ball,
        Group::FockCov,
        Group::Structure,
        Group::Delta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::SigmaClosedForm => "sigma-closed-form",
            Group::SigmaIntegral => "sigma-integral",
            Group::TaylorBlocks => "taylor-blocks",
            Group::ProductKernel => "product-kernel",
            Group::BidiskNorm => "bidisk-norm",
            Group::Hardy => "hardy",
            Group::Ball => "ball",
            Group::FockCov => "fock-cov",
            Group::Structure => "structure",
            Group::Delta => "delta",
        }
    }

    /// Runs the group. The random stream depends only on the seed and the
    /// group, so results do not change with the set of groups selected.
    pub fn run(self, opts: &VerifyOptions) -> Result<Vec<Check>> {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(self as u64);
        match self {
            Group::SigmaClosedForm => sigma_closed_form_checks(&mut rng, opts),
            Group::SigmaIntegral => sigma_integral_checks(&mut rng, opts),
            Group::TaylorBlocks => taylor_block_checks(opts),
            Group::ProductKernel => product_kernel_checks(&mut rng, opts),
            Group::BidiskNorm => bidisk_norm_checks(&mut rng, opts),
            Group::Hardy => hardy_checks(),
            Group::Ball => ball_checks(&mut rng, opts),
            Group::FockCov => fock_checks(&mut rng, opts),
            Group::Structure => structure_checks(&mut rng, opts),
            Group::Delta => delta_checks(&mut rng),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named bundles of groups, as exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Sigma,
    BidiskCore,
    BidiskNorm,
    Hardy,
    Ball,
    FockCov,
    Structure,
    Delta,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] =
        ["sigma", "bidisk-core", "bidisk-norm", "hardy", "ball", "fock-cov", "structure", "delta", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sigma => "sigma",
            Suite::BidiskCore => "bidisk-core",
            Suite::BidiskNorm => "bidisk-norm",
            Suite::Hardy => "hardy",
            Suite::Ball => "ball",
            Suite::FockCov => "fock-cov",
            Suite::Structure => "structure",
            Suite::Delta => "delta",
            Suite::All => "all",
        }
    }

    pub fn groups(self) -> &'static [Group] {
        match self {
            Suite::Sigma => &[Group::SigmaClosedForm, Group::SigmaIntegral],
            Suite::BidiskCore => &[Group::TaylorBlocks, Group::ProductKernel],
            Suite::BidiskNorm => &[Group::BidiskNorm],
            Suite::Hardy => &[Group::Hardy],
            Suite::Ball => &[Group::Ball],
            Suite::FockCov => &[Group::FockCov],
            Suite::Structure => &[Group::Structure],
            Suite::Delta => &[Group::Delta],
            Suite::All => &Group::ALL,
        }
    }

    pub fn run(self, opts: &VerifyOptions) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for g in self.groups() {
            out.extend(g.run(opts)?);
        }
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Suite::Sigma,
            Suite::BidiskCore,
            Suite::BidiskNorm,
            Suite::Hardy,
            Suite::Ball,
            Suite::FockCov,
            Suite::Structure,
            Suite::Delta,
            Suite::All,
        ];
        all.into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'; expected one of {}", Suite::NAMES.join(", "))))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform point of the disc of the given radius.
pub fn random_disc_point<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Uniform point of the polydisc of the given radius.
pub fn random_polydisc_point<R: Rng>(rng: &mut R, radius: f64) -> Point2 {
    Point2::new(random_disc_point(rng, radius), random_disc_point(rng, radius))
}

/// Uniform point of the ball of the given radius in C².
pub fn random_ball_point<R: Rng>(rng: &mut R, radius: f64) -> Point2 {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 < 1.0 && n2 > 0.0 {
            return Point2::new(c(v[0], v[1]) * radius, c(v[2], v[3]) * radius);
        }
    }
}

/// Random polynomial of total degree at most `max_degree` with complex
/// coefficients in the unit square; at least one term of the top degree.
pub fn random_poly<R: Rng>(rng: &mut R, max_degree: u32) -> BiPoly {
    let mut terms = Vec::new();
    for d in 0..=max_degree {
        for i in 0..=d {
            if d == max_degree || rng.random_bool(0.5) {
                terms.push(((i, d - i), c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
            }
        }
    }
    BiPoly::from_terms(terms)
}

fn fmt_params(values: &[(&str, f64)]) -> String {
    values.iter().map(|(k, v)| format!("{k}={v:.6}")).collect::<Vec<_>>().join(",")
}

fn bidisk_label(p: &BidiskParams) -> String {
    fmt_params(&[("alpha", p.alpha), ("beta", p.beta), ("theta", p.theta), ("vartheta", p.vartheta)])
}

fn ball_label(p: &BallParams) -> String {
    fmt_params(&[("alpha", p.alpha), ("beta", p.beta), ("theta", p.theta)])
}

fn fock_label(p: &FockParams) -> String {
    fmt_params(&[("alpha", p.alpha), ("beta", p.beta), ("theta", p.theta)])
}

fn sigma_closed_form_checks(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    (0..20)
        .map(|_| {
            let p = BidiskParams::new(
                rng.random_range(-0.9..4.0),
                rng.random_range(-0.9..4.0),
                rng.random_range(-0.9..6.0),
                0.0,
            )?;
            let series = sigma(&p, &opts.truncation)?;
            Ok(Check::relative(format!("sigma[{}]", bidisk_label(&p)), series, sigma_closed_form(&p)?, 1e-10))
        })
        .collect()
}

fn sigma_integral_checks(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for theta in [0.0, 1.0, 2.0] {
        let p = BidiskParams::new(rng.random_range(-0.5..2.0), rng.random_range(-0.5..2.0), theta, 0.0)?;
        let gram = gram_bidisk_exact(&p, 0)?;
        out.push(Check::relative(
            format!("inverse-sigma-exact[{}]", bidisk_label(&p)),
            inverse_sigma(&p, &opts.truncation)?,
            gram.blocks[0][(0, 0)],
            1e-12,
        ));
    }
    for vartheta in [0.5, 1.3] {
        let theta = f64::from(rng.random_range(0..=2u32));
        let p = BidiskParams::new(rng.random_range(-0.5..2.0), rng.random_range(-0.5..2.0), theta, vartheta)?;
        let gram = gram_numeric(NumericSpace::Bidisk(p), 0, &opts.quadrature, opts.mode)?;
        let quad = gram.blocks[0][(0, 0)];
        let label = bidisk_label(&p);
        // agreement within the quadrature's own error estimate, which must itself be small
        out.push(Check::absolute(
            format!("inverse-sigma-quadrature[{label}]"),
            inverse_sigma(&p, &opts.truncation)?,
            quad,
            gram.error_estimate,
        ));
        out.push(Check::bound(format!("quadrature-error-estimate[{label}]"), gram.error_estimate / quad.abs(), 1e-8));
    }
    Ok(out)
}

fn taylor_block_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    const DEGREE: usize = 8;
    let mut cases = Vec::new();
    for theta in [0.0, 1.0, 2.0] {
        for alpha in [0.0, 0.5, 1.0] {
            for beta in [0.0, 0.5, 1.0] {
                cases.push(BidiskParams::new(alpha, beta, theta, 0.0)?);
            }
        }
    }
    let per_case = try_map_indexed(opts.mode, cases.len(), |i| {
        let p = &cases[i];
        let series = taylor_blocks(p, DEGREE, &opts.truncation)?;
        let oracle = gram_kernel_blocks(&gram_bidisk_exact(p, DEGREE)?)?;
        let label = bidisk_label(p);
        let mut checks = Vec::with_capacity(DEGREE + 1);
        for (d, (k, o)) in series.iter().zip(&oracle).enumerate() {
            // entries vanishing by symmetry are compared against the block scale
            let scale = o.abs().max();
            let worst = (0..=d)
                .flat_map(|i| (0..=d).map(move |j| (i, j)))
                .map(|(i, j)| Check::relative_floor(format!("taylor-block[{label},d={d},i={i},j={j}]"), k[(i, j)], o[(i, j)], scale, 1e-9))
                .max_by(|a, b| a.rel_err.total_cmp(&b.rel_err))
                .expect("blocks are nonempty");
            checks.push(worst);
        }
        Ok(checks)
    })?;
    Ok(per_case.into_iter().flatten().collect())
}

/// Sampling radius for the product-kernel comparison; see the README for
/// the behaviour closer to the distinguished boundary.
const PRODUCT_KERNEL_RADIUS: f64 = 0.9;

fn product_kernel_checks(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let cases: Vec<(f64, f64, Point2, Point2)> = (0..100)
        .map(|_| {
            (
                rng.random_range(-0.9..3.0),
                rng.random_range(-0.9..3.0),
                random_polydisc_point(rng, PRODUCT_KERNEL_RADIUS),
                random_polydisc_point(rng, PRODUCT_KERNEL_RADIUS),
            )
        })
        .collect();
    try_map_indexed(opts.mode, cases.len(), |i| {
        let (alpha, beta, z, w) = cases[i];
        let p = BidiskParams::new(alpha, beta, 0.0, 0.0)?;
        let k = full_kernel(&p, &z, &w, &opts.truncation)?;
        let one = c(1.0, 0.0);
        let exact = (one - w.z1.conj() * z.z1).powf(-alpha - 2.0) * (one - w.z2.conj() * z.z2).powf(-beta - 2.0);
        Ok(Check::relative(format!("product-kernel[{},pair={i}]", bidisk_label(&p)), k.value, exact, 1e-10).with_series(&k))
    })
}

fn bidisk_norm_checks(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let cases: Vec<(BidiskParams, BiPoly)> = (0..50)
        .map(|_| {
            let theta = f64::from(rng.random_range(0..=2u32));
            let p = BidiskParams::new(rng.random_range(-0.5..2.0), rng.random_range(-0.5..2.0), theta, 0.0)?;
            let deg = rng.random_range(0..=6u32);
            Ok((p, random_poly(rng, deg)))
        })
        .collect::<Result<_>>()?;
    let per_case = try_map_indexed(opts.mode, cases.len(), |i| {
        let (p, f) = &cases[i];
        let deg = f.degree().unwrap_or(0);
        let gram = gram_bidisk_exact(p, deg as usize)?;
        let e = norm_expansion(p, f, &opts.truncation)?;
        let total = gram.norm_sqr(f)?;
        let label = format!("{},poly={i}", bidisk_label(p));
        let mut checks = vec![Check::relative(format!("norm-total[{label}]"), e.total, total, 1e-9)];
        for n in 0..=deg {
            let (_, q) = project(&gram, f, n)?;
            checks.push(Check::relative(format!("norm-term[{label},N={n}]"), e.term(n), gram.norm_sqr(&q)?, 1e-9));
        }
        Ok(checks)
    })?;
    Ok(per_case.into_iter().flatten().collect())
}

fn hardy_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for theta in [0u32, 1] {
        for d in 0..=5u32 {
            for m in 0..=d {
                let f = BiPoly::monomial(c(1.0, 0.0), m, d - m);
                let e = hardy_norm_expansion(f64::from(theta), &f)?;
                out.push(Check::relative(
                    format!("hardy-monomial[theta={theta},m={m},n={}]", d - m),
                    e.total,
                    hardy_torus_norm_sqr(theta, &f),
                    1e-10,
                ));
            }
        }
    }
    let e = hardy_norm_expansion(0.0, &BiPoly::diag_power(1))?;
    out.push(Check::relative("hardy-diagonal[theta=0,f=z1-z2]", e.total, 2.0, 1e-10));
    Ok(out)
}

fn ball_checks(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let cfg = &opts.truncation;
    for i in 0..20 {
        let p = BallParams::new(rng.random_range(-0.9..2.0), rng.random_range(-0.9..2.0), rng.random_range(-0.9..2.0))?;
        let deg = rng.random_range(0..=6u32);
        let f = random_poly(rng, deg);
        let gram = ball_monomial_norms(&p, f.degree().unwrap_or(0) as usize)?;
        out.push(Check::relative(
            format!("ball-norm-total[{},poly={i}]", ball_label(&p)),
            ball_norm_expansion(&p, &f)?.total,
            gram.norm_sqr(&f)?,
            1e-10,
        ));
    }
    for i in 0..20 {
        let p = BallParams::new(rng.random_range(-0.9..2.0), rng.random_range(-0.9..2.0), rng.random_range(-0.9..2.0))?;
        let (z, w) = (random_ball_point(rng, 0.9), random_ball_point(rng, 0.9));
        let closed = ball_full_kernel(&p, &z, &w, cfg)?;
        let series = ball_full_kernel_series(&p, &z, &w, cfg)?;
        out.push(
            Check::relative(format!("ball-kernel-series[{},pair={i}]", ball_label(&p)), closed.value, series.value, 1e-8)
                .with_series(&series),
        );
    }
    for i in 0..20 {
        let alpha = rng.random_range(-0.9..3.0);
        let p = BallParams::new(alpha, 0.0, 0.0)?;
        let (z, w) = (random_ball_point(rng, 0.9), random_ball_point(rng, 0.9));
        let k = ball_full_kernel(&p, &z, &w, cfg)?;
        let exact = (c(1.0, 0.0) - z.inner(&w)).powf(-alpha - 3.0) * ((alpha + 1.0) * (alpha + 2.0));
        out.push(Check::relative(format!("ball-kernel-unweighted[{},pair={i}]", ball_label(&p)), k.value, exact, 1e-10).with_series(&k));
    }
    Ok(out)
}

fn fock_checks(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let cfg = &opts.truncation;
    let mut cases = Vec::new();
    for theta in [0.0, 0.5, 1.0, 2.5] {
        for _ in 0..50 {
            let p = FockParams::new(rng.random_range(0.2..3.0), rng.random_range(0.2..3.0), theta)?;
            cases.push((p, random_polydisc_point(rng, 1.5), random_polydisc_point(rng, 1.5)));
        }
    }
    let mut out = try_map_indexed(opts.mode, cases.len(), |i| {
        let (p, z, w) = &cases[i];
        let full = fock_full_kernel(p, z, w, cfg)?;
        let cov = fock_cov_kernel(p, z, w, cfg)?;
        Ok(Check::relative(format!("fock-kernel-cov[{},pair={i}]", fock_label(p)), full.value, cov.value, 1e-9).with_series(&full))
    })?;
    for theta in [0.0, 1.0, 2.0] {
        for i in 0..10 {
            let p = FockParams::new(rng.random_range(0.2..3.0), rng.random_range(0.2..3.0), theta)?;
            let deg = rng.random_range(0..=6u32);
        let f = random_poly(rng, deg);
            let gram = gram_fock_exact(&p, f.degree().unwrap_or(0) as usize)?;
            out.push(Check::relative(
                format!("fock-norm-total[{},poly={i}]", fock_label(&p)),
                fock_norm_expansion(&p, &f)?.total,
                gram.norm_sqr(&f)?,
                1e-10,
            ));
        }
    }
    Ok(out)
}

fn kernel_matrix_checks<K: ReproducingKernel>(label: String, k: &K, points: &[Point2], mode: ExecMode) -> Result<[Check; 2]> {
    let m = kernel_matrix(k, points, mode)?;
    let (lo, hi) = eigen_range(&m);
    Ok([
        Check::bound(format!("hermitian[{label}]"), hermitian_defect(&m), 1e-10),
        Check::bound(format!("psd[{label}]"), (-lo).max(0.0) / hi, 1e-8),
    ])
}

fn structure_checks(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<Check>> {
    const POINTS: usize = 10;
    let cfg = opts.truncation;
    let mut out = Vec::new();
    for _ in 0..10 {
        let p = BidiskParams::new(
            rng.random_range(-0.5..2.0),
            rng.random_range(-0.5..2.0),
            rng.random_range(-0.5..2.0),
            rng.random_range(0.0..1.5),
        )?;
        let pts: Vec<Point2> = (0..POINTS).map(|_| random_polydisc_point(rng, 0.7)).collect();
        out.extend(kernel_matrix_checks(format!("bidisk,{}", bidisk_label(&p)), &BidiskSpace::new(p, cfg)?, &pts, opts.mode)?);
    }
    for _ in 0..10 {
        let p = BallParams::new(rng.random_range(-0.9..2.0), rng.random_range(-0.9..2.0), rng.random_range(-0.9..2.0))?;
        let pts: Vec<Point2> = (0..POINTS).map(|_| random_ball_point(rng, 0.9)).collect();
        out.extend(kernel_matrix_checks(format!("ball,{}", ball_label(&p)), &BallSpace::new(p, cfg)?, &pts, opts.mode)?);
    }
    for _ in 0..10 {
        let p = FockParams::new(rng.random_range(0.2..3.0), rng.random_range(0.2..3.0), rng.random_range(-0.9..3.0))?;
        let pts: Vec<Point2> = (0..POINTS).map(|_| random_polydisc_point(rng, 1.5)).collect();
        out.extend(kernel_matrix_checks(format!("fock,{}", fock_label(&p)), &FockSpace::new(p, cfg)?, &pts, opts.mode)?);
    }
    Ok(out)
}

fn delta_checks(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for _ in 0..5 {
        let p = BidiskParams::new(
            rng.random_range(-0.9..3.0),
            rng.random_range(-0.9..3.0),
            rng.random_range(-0.9..3.0),
            rng.random_range(0.0..2.0),
        )?;
        let label = bidisk_label(&p);
        for big_n in 0..=10u32 {
            for n in 0..=big_n {
                let expected = if n == big_n { 1.0 } else { 0.0 };
                out.push(Check::absolute(format!("bidisk-delta[{label},n={n},N={big_n}]"), delta_sum(&p, n, big_n)?, expected, 1e-10));
            }
        }
    }
    for _ in 0..5 {
        let p = FockParams::new(rng.random_range(0.2..3.0), rng.random_range(0.2..3.0), rng.random_range(-0.9..3.0))?;
        let label = fock_label(&p);
        for big_n in 0..=10u32 {
            for n in 0..=big_n {
                let expected = if n == big_n { 1.0 } else { 0.0 };
                out.push(Check::absolute(format!("fock-delta[{label},n={n},N={big_n}]"), fock_delta_sum(&p, n, big_n)?, expected, 1e-10));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("unknown".parse::<Suite>().is_err());
    }

    #[test]
    fn random_points_stay_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert!(random_ball_point(&mut rng, 0.9).in_ball());
            assert!(random_polydisc_point(&mut rng, 0.9).in_bidisk());
        }
    }

    #[test]
    fn random_poly_has_requested_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 0..6 {
            assert_eq!(random_poly(&mut rng, d).degree(), Some(d));
        }
    }
}
