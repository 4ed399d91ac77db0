//! Ideal induction in tube coordinates: stretching, solenoidal and
//! advection residuals, plus executable checks of the anti-dynamo theorems.

mod fields;
mod terms;
mod theorems;

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::symcore::EvalError;

pub use fields::{parse_field_file, FrameVector, TubeFieldSet, FIELD_KEYS};
pub use terms::{
    advection_constraint_residual, conformal_transform_field, solenoidal_residual, stretching_term, SolenoidalVariant,
};
pub use theorems::{
    check_theorem1, check_theorem2, corollary_metric, theorem1_fixture, theorem2_counter_fixture, theorem2_fixture,
    CorollaryResult, PointValue, ResidualEntry, ResidualReport, SYMBOLIC_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InductionError {
    #[error("torsion tau0 is not declared")]
    MissingTorsion,
    #[error("torsion tau0 = 0 is not admissible: its inverse appears explicitly")]
    ZeroTorsion,
    #[error("parameter `{0}` must be positive, got {1}")]
    NonPositive(&'static str, f64),
    #[error("metric context must be diagonal")]
    NonDiagonalMetric,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
