use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use super::expr::{small_integer, Expr, Func, Node, Rational};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("symbol `{0}` is not bound")]
    Unbound(String),
    #[error("opaque function `{0}` has no concrete definition")]
    OpaqueFunction(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of non-positive value {0}")]
    LogDomain(f64),
    #[error("square root of negative value {0}")]
    SqrtDomain(f64),
    #[error("non-integer power of negative base {0}")]
    PowDomain(f64),
    #[error("result is not finite")]
    NonFinite,
    #[error("expression is not rational: {0}")]
    NotRational(String),
}

/// Numeric values for the free symbols of an expression.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Binding<T> {
    values: BTreeMap<String, T>,
}

impl<T: Scalar> Binding<T> {
    pub fn new() -> Binding<T> {
        Binding {
            values: BTreeMap::new(),
        }
    }

    pub fn from_pairs(pairs: &[(&str, T)]) -> Binding<T> {
        Binding {
            values: pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn set(&mut self, name: &str, value: T) {
        self.values.insert(name.to_string(), value);
    }

    pub fn with(mut self, name: &str, value: T) -> Binding<T> {
        self.set(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<T> {
        self.values.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, T)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Overlay `other` on top of `self`.
    pub fn merged(&self, other: &Binding<T>) -> Binding<T> {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.set(k, v);
        }
        out
    }
}

impl<T: Scalar> FromIterator<(String, T)> for Binding<T> {
    fn from_iter<I: IntoIterator<Item = (String, T)>>(iter: I) -> Self {
        Binding {
            values: iter.into_iter().collect(),
        }
    }
}

fn finite<T: Scalar>(x: T) -> Result<T, EvalError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn power<T: Scalar>(base: T, exponent: T, integer: Option<i64>) -> Result<T, EvalError> {
    if let Some(n) = integer.or_else(|| {
        let r = exponent.round();
        (r == exponent && r.abs() < T::lit(1e9)).then(|| r.to_i64()).flatten()
    }) {
        if n < 0 && base.is_zero() {
            return Err(EvalError::DivisionByZero);
        }
        return match i32::try_from(n) {
            Ok(k) => finite(base.powi(k)),
            Err(_) => finite(base.powf(exponent)),
        };
    }
    if base < T::zero() {
        return Err(EvalError::PowDomain(base.to_f64_lossy()));
    }
    if base.is_zero() && exponent < T::zero() {
        return Err(EvalError::DivisionByZero);
    }
    finite(base.powf(exponent))
}

impl Expr {
    /// Evaluate at a full binding of the free symbols.
    pub fn evaluate<T: Scalar>(&self, b: &Binding<T>) -> Result<T, EvalError> {
        match self.node() {
            Node::Const(q) => Ok(T::from_rational(q)),
            Node::Sym(s) => b.get(s).ok_or_else(|| EvalError::Unbound(s.to_string())),
            Node::Add(terms) => {
                let mut acc = T::zero();
                for t in terms {
                    acc = acc + t.evaluate(b)?;
                }
                finite(acc)
            }
            Node::Mul(factors) => {
                let mut acc = T::one();
                for f in factors {
                    acc = acc * f.evaluate(b)?;
                }
                finite(acc)
            }
            Node::Div(num, den) => {
                let d = den.evaluate(b)?;
                if d.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                finite(num.evaluate(b)? / d)
            }
            Node::Pow(base, exponent) => {
                let integer = exponent.as_const().and_then(small_integer);
                power(base.evaluate(b)?, exponent.evaluate(b)?, integer)
            }
            Node::Func(f, arg) => {
                let x = arg.evaluate(b)?;
                match f {
                    Func::Sin => Ok(x.sin()),
                    Func::Cos => Ok(x.cos()),
                    Func::Exp => finite(x.exp()),
                    Func::Ln => {
                        if x <= T::zero() {
                            Err(EvalError::LogDomain(x.to_f64_lossy()))
                        } else {
                            Ok(x.ln())
                        }
                    }
                    Func::Sqrt => {
                        if x < T::zero() {
                            Err(EvalError::SqrtDomain(x.to_f64_lossy()))
                        } else {
                            Ok(x.sqrt())
                        }
                    }
                }
            }
            Node::Apply(app) => Err(EvalError::OpaqueFunction(app.name.to_string())),
        }
    }

    /// Exact evaluation for purely rational expressions (no transcendental
    /// functions, integer powers only).
    pub fn evaluate_exact(&self, b: &BTreeMap<String, Rational>) -> Result<Rational, EvalError> {
        match self.node() {
            Node::Const(q) => Ok(q.clone()),
            Node::Sym(s) => b.get(&**s).cloned().ok_or_else(|| EvalError::Unbound(s.to_string())),
            Node::Add(terms) => terms
                .iter()
                .try_fold(Rational::zero(), |acc, t| Ok(acc + t.evaluate_exact(b)?)),
            Node::Mul(factors) => {
                factors.iter().try_fold(
                    Rational::from_integer(1.into()),
                    |acc, f| Ok(acc * f.evaluate_exact(b)?),
                )
            }
            Node::Div(num, den) => {
                let d = den.evaluate_exact(b)?;
                if d.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                Ok(num.evaluate_exact(b)? / d)
            }
            Node::Pow(base, exponent) => {
                let e = exponent.evaluate_exact(b)?;
                let n = small_integer(&e)
                    .and_then(|n| i32::try_from(n).ok())
                    .ok_or_else(|| EvalError::NotRational(self.to_string()))?;
                let x = base.evaluate_exact(b)?;
                if x.is_zero() && n.is_negative() {
                    return Err(EvalError::DivisionByZero);
                }
                Ok(num_traits::pow::Pow::pow(x, n))
            }
            Node::Func(..) => Err(EvalError::NotRational(self.to_string())),
            Node::Apply(app) => Err(EvalError::OpaqueFunction(app.name.to_string())),
        }
    }
}

/// Default finite-difference step: `1e-4 * max(1, |x|)`.
pub fn fd_step<T: Scalar>(x: T) -> T {
    T::lit(1e-4) * T::one().max(x.abs())
}

/// Five-point central difference `(-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h`.
pub fn central_difference<T: Scalar, E>(mut f: impl FnMut(T) -> Result<T, E>, x: T, h: T) -> Result<T, E> {
    let two = T::lit(2.0);
    let eight = T::lit(8.0);
    let f_p2 = f(x + two * h)?;
    let f_p1 = f(x + h)?;
    let f_m1 = f(x - h)?;
    let f_m2 = f(x - two * h)?;
    Ok((-f_p2 + eight * f_p1 - eight * f_m1 + f_m2) / (T::lit(12.0) * h))
}

/// Fourth-order numeric derivative of `e` with respect to `var` at `b`.
pub fn numeric_derivative<T: Scalar>(e: &Expr, var: &str, b: &Binding<T>, h: T) -> Result<T, EvalError> {
    let x = b.get(var).ok_or_else(|| EvalError::Unbound(var.to_string()))?;
    let mut probe = b.clone();
    central_difference(
        |xv| {
            probe.set(var, xv);
            e.evaluate(&probe)
        },
        x,
        h,
    )
}

/// [`numeric_derivative`] with the step chosen by [`fd_step`].
pub fn numeric_derivative_auto<T: Scalar>(e: &Expr, var: &str, b: &Binding<T>) -> Result<T, EvalError> {
    let x = b.get(var).ok_or_else(|| EvalError::Unbound(var.to_string()))?;
    numeric_derivative(e, var, b, fd_step(x))
}
