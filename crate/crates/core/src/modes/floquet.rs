use super::ModesError;
use crate::scalar::Scalar;

/// γ = ln(b_end / b_start) / T for a mode that grows by a positive factor
/// over one period.
pub fn floquet_growth<T: Scalar>(b_start: T, b_end: T, period: T) -> Result<T, ModesError> {
    if b_start.is_zero() {
        return Err(ModesError::ZeroStart);
    }
    if !(period > T::zero()) {
        return Err(ModesError::NonPositivePeriod(period.to_f64_lossy()));
    }
    let ratio = b_end / b_start;
    if !(ratio > T::zero()) {
        return Err(ModesError::NonPositiveRatio(ratio.to_f64_lossy()));
    }
    Ok(ratio.ln() / period)
}

/// Ω = e^{γT}.
pub fn conformal_factor_from_growth<T: Scalar>(gamma: T, period: T) -> T {
    (gamma * period).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        assert_eq!(floquet_growth(1.0, std::f64::consts::E, 1.0).unwrap(), 1.0);
        assert_eq!(floquet_growth(3.0, 3.0, 2.0).unwrap(), 0.0);
        let g = floquet_growth(2.0, 4.0, 2.0).unwrap();
        assert!((g - 0.34657359027997264f64).abs() < 1e-15);
        assert_eq!(conformal_factor_from_growth(0.0, 5.0), 1.0);
        assert!((conformal_factor_from_growth(1.0f32, 1.0) - std::f32::consts::E).abs() < 1e-6);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(floquet_growth(0.0, 1.0, 1.0), Err(ModesError::ZeroStart));
        assert!(matches!(
            floquet_growth(1.0, -1.0, 1.0),
            Err(ModesError::NonPositiveRatio(_))
        ));
        assert!(matches!(
            floquet_growth(1.0, 2.0, 0.0),
            Err(ModesError::NonPositivePeriod(_))
        ));
    }

    #[test]
    fn roundtrip() {
        for x in [0.5f64, 1.0, 3.0] {
            let g = floquet_growth(1.0, x, 2.5).unwrap();
            assert!((conformal_factor_from_growth(g, 2.5) - x).abs() < 1e-15f64);
        }
    }
}
