//! Reproducing kernels, σ-constants and norm expansions for weighted
//! holomorphic spaces on the bidisk, the unit ball of C^2 and C^2 with
//! Gaussian weights, together with an exact Gram-matrix oracle.

// `!(x > a)` guards deliberately reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod bidisk;
pub mod config;
pub mod disk;
pub mod error;
pub mod fock;
pub mod grid;
pub mod oracle;
pub mod par;
pub mod point;
pub mod poly;
pub mod report;
pub mod specfun;
pub mod verify;

pub use config::{QuadratureConfig, TruncationConfig};
pub use error::{Error, Result};
pub use point::Point2;
pub use poly::{BiPoly, UniPoly, Var};
pub use specfun::SeriesResult;
