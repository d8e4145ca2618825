//! Exact-arithmetic coverings of lattice simplices by dilated lattice simplices.
//!
//! A lattice simplex `P` with large enough edge lattice lengths can be written as a
//! finite union of sub-simplices of the form `kQ + v` ("k-dilations") with `Q` a lattice
//! simplex and `k >= dim(P) - 1`, which in turn certifies that `P` is integrally closed.
//! This crate builds those covers (apex dilations, their lattice translations, and
//! explicit dilations), certifies coverage exactly with a rational-arithmetic LP, and
//! estimates uncovered volume by seeded Monte Carlo sampling.
//!
//! Everything outside the Monte Carlo sampler runs on arbitrary-precision integers and
//! rationals; strict/non-strict inequality decisions are never made in floating point.

// Index-heavy matrix code reads better with explicit ranges.
#![allow(clippy::needless_range_loop)]

pub mod closure;
pub mod coverage;
pub mod dilation;
mod error;
pub mod fixtures;
pub mod io;
pub mod lattice;
pub mod lp;
pub mod strategy;

pub use error::{Error, Result};
