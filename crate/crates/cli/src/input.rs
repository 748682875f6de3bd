use std::fs;
use std::path::Path;

use kernelforge::poly::{parse_bipoly, BiPoly};
use kernelforge::Point2;
use num_complex::Complex64;

use crate::Failure;

/// Parses "z1,z2,w1,w2" (reals) or "z1re,z1im,z2re,z2im,w1re,w1im,w2re,w2im".
/// Whitespace may stand in for commas.
pub fn parse_pair(s: &str) -> Result<(Point2, Point2), Failure> {
    let nums: Vec<f64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Failure::Usage(format!("bad number '{t}' in pair '{s}'"))))
        .collect::<Result<_, _>>()?;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match nums[..] {
        [z1, z2, w1, w2] => Ok((Point2::real(z1, z2), Point2::real(w1, w2))),
        [a, b, c2, d, e, f, g, h] => Ok((Point2::new(c(a, b), c(c2, d)), Point2::new(c(e, f), c(g, h)))),
        _ => Err(Failure::Usage(format!("a pair needs 4 or 8 numbers, got {} in '{s}'", nums.len()))),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// One pair per line; blank lines and `#` comments are skipped.
pub fn read_pairs(path: &Path) -> Result<Vec<(Point2, Point2)>, Failure> {
    read(path)?
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_pair)
        .collect()
}

pub fn parse_poly(text: &str) -> Result<BiPoly, Failure> {
    let t = text.trim();
    if t.starts_with('[') {
        serde_json::from_str(t).map_err(|e| Failure::Usage(format!("bad JSON polynomial: {e}")))
    } else {
        parse_bipoly(t).map_err(|e| Failure::Usage(e.to_string()))
    }
}

pub fn read_poly(path: &Path) -> Result<BiPoly, Failure> {
    parse_poly(&read(path)?)
}
