//! Symbolic-numeric engine for conformal flux-tube geometry and kinematic
//! dynamo growth rates.
//!
//! Expressions are exact trees with rational constants; every numeric routine
//! is generic over [`Scalar`] (`f32` or `f64`). The `*64` aliases below fix the
//! scalar to `f64`, which is what the command-line front end uses.

// Tensor code reads best with explicit index loops.
#![allow(clippy::needless_range_loop)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod geometry;
pub mod grid;
pub mod induction;
pub mod ledger;
pub mod modes;
pub mod report;
pub mod scalar;
pub mod symcore;

pub use scalar::Scalar;
pub use symcore::{Binding, Expr, Rational};

pub type Binding64 = Binding<f64>;
pub type Binding32 = Binding<f32>;
