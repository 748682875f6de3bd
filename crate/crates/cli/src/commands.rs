use std::fs;
use std::path::Path;

use kernelforge::ball::{ball_norm_expansion, BallParams, BallSpace};
use kernelforge::bidisk::{norm_expansion, sigma, sigma_closed_form, BidiskParams, BidiskSpace};
use kernelforge::disk::NormExpansion;
use kernelforge::fock::{fock_norm_expansion, fock_sigma, FockParams, FockSpace};
use kernelforge::grid::kernel_values;
use kernelforge::oracle::{
    ball_monomial_norm_sqr, ball_monomial_norms, gram_bidisk_exact, gram_fock_exact, gram_kernel_blocks, gram_numeric,
    kernel_from_blocks, GramBlocks, NumericSpace, SpaceParams,
};
use kernelforge::par::ExecMode;
use kernelforge::report::Check;
use kernelforge::verify::VerifyOptions;
use kernelforge::{Error, Point2, QuadratureConfig, SeriesResult, TruncationConfig};
use serde_json::{json, Map, Value};

use crate::cli::{KernelArgs, NormArgs, OracleArgs, SpaceArgs, SpaceKind, VerifyArgs};
use crate::input::{parse_pair, parse_poly, read_pairs, read_poly};
use crate::Failure;

pub const MAX_TERMS_VAR: &str = "KERNELFORGE_MAX_TERMS";

/// Items and echoed parameters of one command.
pub struct Outcome {
    pub parameters: Value,
    pub items: Vec<Check>,
}

fn truncation(args: &SpaceArgs) -> Result<TruncationConfig, Failure> {
    if !(args.tol > 0.0 && args.tol < 1.0) {
        return Err(Failure::Usage(format!("--tol must lie in (0, 1), got {}", args.tol)));
    }
    let mut cfg = TruncationConfig { tolerance: args.tol, ..TruncationConfig::default() };
    if let Ok(v) = std::env::var(MAX_TERMS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{MAX_TERMS_VAR} must be a positive integer, got '{v}'")))?;
        cfg.max_terms = n;
        cfg.max_outer_terms = cfg.max_outer_terms.min(n);
    }
    Ok(cfg)
}

enum Space {
    Bidisk(BidiskSpace),
    Ball(BallSpace),
    Fock(FockSpace),
}

impl Space {
    fn new(args: &SpaceArgs, cfg: TruncationConfig) -> Result<Self, Failure> {
        if args.space != SpaceKind::Bidisk && args.vartheta != 0.0 {
            return Err(Error::Domain(format!("--vartheta applies to the bidisk only, not the {} space", args.space.name())).into());
        }
        Ok(match args.space {
            SpaceKind::Bidisk => Space::Bidisk(BidiskSpace::new(
                BidiskParams::new(args.alpha, args.beta, args.theta, args.vartheta)?,
                cfg,
            )?),
            SpaceKind::Ball => Space::Ball(BallSpace::new(BallParams::new(args.alpha, args.beta, args.theta)?, cfg)?),
            SpaceKind::Fock => Space::Fock(FockSpace::new(FockParams::new(args.alpha, args.beta, args.theta)?, cfg)?),
        })
    }

    fn params(&self) -> SpaceParams {
        match self {
            Space::Bidisk(s) => SpaceParams::Bidisk(*s.params()),
            Space::Ball(s) => SpaceParams::Ball(s.params),
            Space::Fock(s) => SpaceParams::Fock(s.params),
        }
    }

    fn kernel(&self, pairs: &[(Point2, Point2)], mode: ExecMode) -> kernelforge::Result<Vec<SeriesResult>> {
        match self {
            Space::Bidisk(s) => kernel_values(s, pairs, mode),
            Space::Ball(s) => kernel_values(s, pairs, mode),
            Space::Fock(s) => kernel_values(s, pairs, mode),
        }
    }
}

fn parameters(args: &SpaceArgs, cfg: &TruncationConfig, extra: Value) -> Value {
    let mut m = Map::new();
    m.insert("space".into(), json!(args.space.name()));
    m.insert("alpha".into(), json!(args.alpha));
    m.insert("beta".into(), json!(args.beta));
    m.insert("theta".into(), json!(args.theta));
    if args.space == SpaceKind::Bidisk {
        m.insert("vartheta".into(), json!(args.vartheta));
    }
    m.insert("tol".into(), json!(cfg.tolerance));
    m.insert("max_terms".into(), json!(cfg.max_terms));
    if let Value::Object(e) = extra {
        m.extend(e);
    }
    Value::Object(m)
}

fn oracle_parameters(o: &OracleArgs, tol: f64) -> Value {
    json!({ "oracle": o.oracle, "oracle_degree": o.oracle_degree, "oracle_tol": tol, "quad_tol": o.quad_tol })
}

fn compute_gram(params: SpaceParams, degree: usize, quad: &QuadratureConfig, mode: ExecMode) -> kernelforge::Result<GramBlocks> {
    match params {
        SpaceParams::Bidisk(p) if p.integer_theta().is_some() => gram_bidisk_exact(&p, degree),
        SpaceParams::Bidisk(p) => gram_numeric(NumericSpace::Bidisk(p), degree, quad, mode),
        SpaceParams::Fock(p) if p.integer_theta().is_some() => gram_fock_exact(&p, degree),
        SpaceParams::Fock(p) => gram_numeric(NumericSpace::Fock(p), degree, quad, mode),
        SpaceParams::Ball(p) => ball_monomial_norms(&p, degree),
    }
}

/// Gram blocks up to `degree`, reusing the cache file when it holds blocks
/// for the same parameters and at least that degree; otherwise the cache is
/// rewritten.
fn gram(params: SpaceParams, degree: usize, o: &OracleArgs, mode: ExecMode) -> Result<GramBlocks, Failure> {
    let quad = QuadratureConfig { tolerance: o.quad_tol, ..QuadratureConfig::default() };
    let Some(path) = &o.gram_cache else {
        return Ok(compute_gram(params, degree, &quad, mode)?);
    };
    if let Some(g) = load_cache(path)? {
        let precise = g.exact || g.error_estimate <= quad.tolerance;
        if g.params == params && g.max_degree >= degree && precise {
            return Ok(g);
        }
    }
    let g = compute_gram(params, degree, &quad, mode)?;
    let text = serde_json::to_string(&g).map_err(|e| Failure::Io(e.to_string()))?;
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(g)
}

fn load_cache(path: &Path) -> Result<Option<GramBlocks>, Failure> {
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Failure::Io(format!("{}: not a Gram cache: {e}", path.display())))
}

pub fn kernel(args: &KernelArgs, mode: ExecMode) -> Result<Outcome, Failure> {
    let cfg = truncation(&args.space)?;
    let mut pairs = Vec::new();
    for p in &args.pair {
        pairs.push(parse_pair(p)?);
    }
    if let Some(path) = &args.points {
        pairs.extend(read_pairs(path)?);
    }
    if pairs.is_empty() {
        return Err(Failure::Usage("no points given; use --pair or --points".into()));
    }
    let space = Space::new(&args.space, cfg)?;
    let values = space.kernel(&pairs, mode)?;
    let oracle = if args.oracle.oracle {
        let g = gram(space.params(), args.oracle.oracle_degree, &args.oracle, mode)?;
        let mut blocks = gram_kernel_blocks(&g)?;
        // a cache may hold more degrees; the oracle must not depend on it
        blocks.truncate(args.oracle.oracle_degree + 1);
        Some(pairs.iter().map(|(z, w)| kernel_from_blocks(&blocks, z, w)).collect::<Vec<_>>())
    } else {
        None
    };
    let items = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let item = format!("k[{i}]");
            match &oracle {
                Some(o) => Check::relative(item, v.value, o[i], args.oracle_tol),
                None => Check::value(item, v.value),
            }
            .with_series(v)
        })
        .collect();
    let parameters = parameters(&args.space, &cfg, oracle_parameters(&args.oracle, args.oracle_tol));
    Ok(Outcome { parameters, items })
}

pub fn norm_expand(args: &NormArgs, mode: ExecMode) -> Result<Outcome, Failure> {
    let cfg = truncation(&args.space)?;
    let f = match (&args.poly, &args.poly_file) {
        (Some(s), None) => parse_poly(s)?,
        (None, Some(p)) => read_poly(p)?,
        _ => return Err(Failure::Usage("give exactly one of --poly and --poly-file".into())),
    };
    let space = Space::new(&args.space, cfg)?;
    let expansion: NormExpansion = match &space {
        Space::Bidisk(s) => norm_expansion(s.params(), &f, &cfg)?,
        Space::Ball(s) => ball_norm_expansion(&s.params, &f)?,
        Space::Fock(s) => fock_norm_expansion(&s.params, &f)?,
    };
    let mut items: Vec<Check> =
        expansion.terms.iter().map(|t| Check::value(format!("term[{}]", t.order), t.value)).collect();
    items.push(if args.oracle.oracle {
        let g = gram(space.params(), f.degree().unwrap_or(0) as usize, &args.oracle, mode)?;
        Check::relative("total", expansion.total, g.norm_sqr(&f)?, args.oracle_tol)
    } else {
        Check::value("total", expansion.total)
    });
    let extra = oracle_parameters(&args.oracle, args.oracle_tol);
    let mut parameters = parameters(&args.space, &cfg, extra);
    parameters["poly"] = json!(f);
    Ok(Outcome { parameters, items })
}

/// Tolerance of the sigma cross-checks against Gamma and moment forms.
const SIGMA_CROSS_TOL: f64 = 1e-10;

pub fn sigma_cmd(args: &SpaceArgs) -> Result<Outcome, Failure> {
    let cfg = truncation(args)?;
    let space = Space::new(args, cfg)?;
    let (s, cross) = match &space {
        Space::Bidisk(b) => {
            let p = b.params();
            let cross = if p.vartheta == 0.0 { Some(sigma_closed_form(p)?) } else { None };
            (sigma(p, &cfg)?, cross)
        }
        Space::Fock(f) => {
            let p = &f.params;
            let cross = match p.integer_theta() {
                Some(_) => Some(1.0 / gram_fock_exact(p, 0)?.blocks[0][(0, 0)]),
                None => None,
            };
            (fock_sigma(p)?, cross)
        }
        Space::Ball(b) => (1.0 / ball_monomial_norm_sqr(&b.params, 0, 0)?, None),
    };
    let mut items = vec![match cross {
        Some(c) => Check::relative("sigma", s, c, SIGMA_CROSS_TOL),
        None => Check::value("sigma", s),
    }];
    items.push(Check::value("inverse_sigma", 1.0 / s));
    Ok(Outcome { parameters: parameters(args, &cfg, Value::Null), items })
}

pub fn verify(args: &VerifyArgs, mode: ExecMode) -> Result<Outcome, Failure> {
    let opts = VerifyOptions { seed: args.seed, mode, ..VerifyOptions::default() };
    let items = args.suite.run(&opts)?;
    Ok(Outcome { parameters: json!({ "suite": args.suite.name(), "seed": args.seed }), items })
}
