use num_complex::Complex64;

use super::{Classification, GrowthResult, NamedValue, MARGINAL_TOLERANCE};

/// γ = ½[−η(1 + κ²) + √(η²(1 − κ²)² − 4κ)], κ the Gaussian curvature.
/// The square root is complex when the discriminant is negative.
pub fn chicone_latushkin_gamma(eta: f64, kappa_gauss: f64) -> GrowthResult {
    let gamma = raw(eta, kappa_gauss);
    let ideal = raw(0.0, kappa_gauss);
    let discriminant = discriminant(eta, kappa_gauss);
    let mut classification = classify_complex(gamma);
    if classification == Classification::Slow && ideal.re > MARGINAL_TOLERANCE {
        classification = Classification::Fast;
    }
    GrowthResult {
        gamma: gamma.re,
        gamma_im: gamma.im,
        classification,
        residuals: vec![NamedValue::new("discriminant", discriminant)],
        provenance: format!(
            "closed form at eta = {eta}, kappa_gauss = {kappa_gauss}; \
             fast means Re gamma stays positive at eta = 0"
        ),
        notes: Vec::new(),
        weak_torsion: None,
    }
}

fn discriminant(eta: f64, k: f64) -> f64 {
    eta * eta * (1.0 - k * k).powi(2) - 4.0 * k
}

fn raw(eta: f64, k: f64) -> Complex64 {
    let root = Complex64::new(discriminant(eta, k), 0.0).sqrt();
    0.5 * (Complex64::new(-eta * (1.0 + k * k), 0.0) + root)
}

/// Classification by the sign of Re γ. Positive growth is reported as slow
/// here; callers that know the ideal limit upgrade it to fast.
pub fn classify_complex(gamma: Complex64) -> Classification {
    if gamma.re > MARGINAL_TOLERANCE {
        Classification::Slow
    } else if gamma.re < -MARGINAL_TOLERANCE {
        Classification::Decaying
    } else if gamma.im.abs() > MARGINAL_TOLERANCE {
        Classification::Oscillatory
    } else {
        Classification::Marginal
    }
}
