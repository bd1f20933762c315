//! Low-rank sum-of-squares factorization on real projective varieties.
//!
//! A quadratic form `f` on a variety `X` is approximated by `l_1^2 + ... + l_k^2`
//! with `l_i` linear forms on `X`, by minimizing `||sigma_k(l) - f||^2` with
//! LBFGS. Alongside the solver the crate computes the first- and second-order
//! data of that objective, linear syzygies of a tuple, and checks explicit
//! certificates that a stationary point is spurious.

// NaN-rejecting guards are written as negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod gallery;
pub mod harness;
pub mod path;
pub mod solver;
pub mod sosmap;
pub mod stationarity;

pub use algebra::{CoordinateRing, LinearForm, LinearTuple, Monomial, QuadraticForm, VarietySpec};
pub use error::{Error, Result};
