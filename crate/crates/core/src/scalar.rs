//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

use crate::symcore::Rational;

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("every finite f64 converts to a float scalar")
    }

    /// Nearest representable value of an exact rational.
    fn from_rational(q: &Rational) -> Self {
        let approx = q.to_f64().unwrap_or(f64::NAN);
        Self::lit(approx)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `|a - b| / max(1, |a|, |b|)`: relative for large magnitudes, absolute near zero.
pub fn mixed_diff<T: Scalar>(a: T, b: T) -> T {
    let scale = T::one().max(a.abs()).max(b.abs());
    (a - b).abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_conversion() {
        let q = Rational::new(1.into(), 4.into());
        assert_eq!(f64::from_rational(&q), 0.25);
        assert_eq!(f32::from_rational(&q), 0.25f32);
    }

    #[test]
    fn mixed_diff_is_absolute_near_zero() {
        assert!((mixed_diff(1e-9, 0.0) - 1e-9f64).abs() < 1e-20);
        assert!((mixed_diff(200.0, 202.0) - 2.0f64 / 202.0).abs() < 1e-15);
    }
}
