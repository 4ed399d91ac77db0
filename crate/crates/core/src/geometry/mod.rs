//! Tube-chart geometry: metrics, connection, curvature and flatness.

mod catalog;
mod curvature;
mod file;
mod flatness;
mod metric;
pub mod oracle;

use thiserror::Error;

use crate::grid::ChartPoint;
use crate::symcore::{EvalError, ParseError};

pub use catalog::{catalog_names, metric_catalog, CATALOG};
pub use curvature::{christoffel, riemann, Christoffel, RiemannTensor, INDEPENDENT_PAIRS};
pub use file::{parse_definition_file, parse_metric_file, DefinitionFile};
pub use flatness::{flatness_condition, CandidateResidual, FlatnessCandidate, FlatnessReport, FLATNESS_RADII};
pub use metric::{Chart, Metric, COORDS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("unknown catalog metric `{0}`; expected one of {1}")]
    UnknownMetric(String, String),
    #[error("unsupported chart ({0}); only `r, theta_R, s` is available")]
    UnsupportedChart(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("metric has a zero diagonal entry g_{0}{0}")]
    ZeroDiagonal(usize),
    #[error("metric determinant simplifies to zero")]
    Singular,
    #[error("metric `{metric}` is not positive definite at {point:?}")]
    NotPositiveDefinite { metric: String, point: ChartPoint },
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("line {line}: {message}")]
    File { line: usize, message: String },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
}
