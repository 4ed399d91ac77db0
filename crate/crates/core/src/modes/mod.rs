//! Growth-rate analysis: Floquet extraction, the scalar mode system with its
//! weak-torsion limit, a closed-form curvature growth rate and frame rules.

mod closed_form;
mod floquet;
mod frenet;
mod system;

use serde::Serialize;
use thiserror::Error;

use crate::symcore::EvalError;

pub use closed_form::{chicone_latushkin_gamma, classify_complex};
pub use floquet::{conformal_factor_from_growth, floquet_growth};
pub use frenet::{FrameDerivative, FrenetFrame};
pub use system::{
    marginal_mode_solve, scalar_mode_residuals, ModeParams, WeakTorsionCheck, THETA_SAMPLES, WEAK_TORSION_EPS,
};

/// |Re γ| below this counts as zero.
pub const MARGINAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModesError {
    #[error("start amplitude is zero")]
    ZeroStart,
    #[error("amplitude ratio {0} is not positive")]
    NonPositiveRatio(f64),
    #[error("period must be positive, got {0}")]
    NonPositivePeriod(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Fast,
    Slow,
    Marginal,
    Decaying,
    Oscillatory,
    Indeterminate,
    Inconsistent,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Fast => "fast",
            Classification::Slow => "slow",
            Classification::Marginal => "marginal",
            Classification::Decaying => "decaying",
            Classification::Oscillatory => "oscillatory",
            Classification::Indeterminate => "indeterminate",
            Classification::Inconsistent => "inconsistent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

impl NamedValue {
    pub fn new(name: impl Into<String>, value: f64) -> NamedValue {
        NamedValue {
            name: name.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthResult {
    /// Real part of γ; `NaN` when no γ is determined.
    pub gamma: f64,
    pub gamma_im: f64,
    pub classification: Classification,
    pub residuals: Vec<NamedValue>,
    pub provenance: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_torsion: Option<WeakTorsionCheck>,
}
