//! Minimal computer-algebra core: parsing, differentiation, canonical
//! simplification and numeric evaluation of expressions over the tube chart
//! `(r, theta_R, s, t)` and named parameters.

mod diff;
mod eval;
mod expr;
mod parse;
mod simplify;

pub use eval::{central_difference, fd_step, numeric_derivative, numeric_derivative_auto, Binding, EvalError};
pub use expr::{realize, Applied, Expr, Func, FunctionDef, Node, Rational};
pub use parse::{parse_expr, ParseError, Parser};
