use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::GeometryError;
use crate::grid::{ChartPoint, SampleGrid};
use crate::scalar::Scalar;
use crate::symcore::{realize, Binding, Expr, FunctionDef};

/// Coordinate names of the tube chart, index 0 = r, 1 = theta, 2 = s.
pub const COORDS: [&str; 3] = ["r", "theta_R", "s"];

/// Ordered coordinate names. Always `(r, theta_R, s)` for this engine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chart {
    coords: [String; 3],
}

impl Default for Chart {
    fn default() -> Self {
        Chart {
            coords: COORDS.map(str::to_string),
        }
    }
}

impl Chart {
    pub fn tube() -> Chart {
        Chart::default()
    }

    /// Only the tube chart is supported; names must match it exactly.
    pub fn from_names(names: &[&str]) -> Result<Chart, GeometryError> {
        if names != COORDS {
            return Err(GeometryError::UnsupportedChart(names.join(", ")));
        }
        Ok(Chart::tube())
    }

    pub fn coord(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[String; 3] {
        &self.coords
    }

    /// Short label used in component names: `r`, `th`, `s`.
    pub fn label(i: usize) -> &'static str {
        ["r", "th", "s"][i]
    }
}

fn slot(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        (2, 2) => 5,
        _ => panic!("metric index out of range: ({i}, {j})"),
    }
}

/// Symmetric 3x3 metric over the tube chart. Only the upper triangle is
/// stored, so `g(i, j) == g(j, i)` holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub name: String,
    chart: Chart,
    entries: [Expr; 6],
    /// Default parameter values, e.g. `kappa = 0.1`.
    pub params: BTreeMap<String, f64>,
    /// Concrete stand-ins for opaque functions, used whenever the metric is
    /// evaluated numerically.
    pub functions: BTreeMap<String, FunctionDef>,
    /// Free-form annotations: comparison notes and domain warnings.
    pub notes: Vec<String>,
}

impl Metric {
    pub fn diagonal(name: &str, diag: [Expr; 3]) -> Metric {
        let [a, b, c] = diag;
        Metric {
            name: name.to_string(),
            chart: Chart::tube(),
            entries: [a, Expr::zero(), Expr::zero(), b, Expr::zero(), c],
            params: BTreeMap::new(),
            functions: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Build from the full matrix; the lower triangle is ignored.
    pub fn from_upper(name: &str, rows: [[Expr; 3]; 3]) -> Metric {
        let mut m = Metric::diagonal(name, [rows[0][0].clone(), rows[1][1].clone(), rows[2][2].clone()]);
        m.entries[1] = rows[0][1].clone();
        m.entries[2] = rows[0][2].clone();
        m.entries[4] = rows[1][2].clone();
        m
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Metric {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn with_function(mut self, name: &str, def: FunctionDef) -> Metric {
        self.functions.insert(name.to_string(), def);
        self
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn g(&self, i: usize, j: usize) -> &Expr {
        &self.entries[slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Expr) {
        self.entries[slot(i, j)] = value;
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries[1].simplify().is_zero()
            && self.entries[2].simplify().is_zero()
            && self.entries[4].simplify().is_zero()
    }

    /// Entry with opaque functions replaced by their concrete stand-ins.
    pub fn realized(&self, i: usize, j: usize) -> Expr {
        realize(self.g(i, j), &self.functions)
    }

    pub fn realize(&self, e: &Expr) -> Expr {
        realize(e, &self.functions)
    }

    /// Parameters plus chart coordinates at `point`.
    pub fn binding_at<T: Scalar>(&self, point: &[T; 3]) -> Binding<T> {
        let mut b: Binding<T> = self.params.iter().map(|(k, v)| (k.clone(), T::lit(*v))).collect();
        for (i, name) in self.chart.coords.iter().enumerate() {
            b.set(name, point[i]);
        }
        b
    }

    /// Parameter overrides, rejecting names that are not parameters.
    pub fn override_params(&mut self, overrides: &BTreeMap<String, f64>) -> Result<(), GeometryError> {
        for (k, v) in overrides {
            if !self.params.contains_key(k) {
                return Err(GeometryError::UnknownParameter(k.clone()));
            }
            self.params.insert(k.clone(), *v);
        }
        Ok(())
    }

    pub fn evaluate_at<T: Scalar>(&self, point: &[T; 3]) -> Result<[[T; 3]; 3], GeometryError> {
        let b = self.binding_at(point);
        let mut out = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let v = self.realized(i, j).evaluate(&b)?;
                out[i][j] = v;
                out[j][i] = v;
            }
        }
        Ok(out)
    }

    /// Sylvester's criterion at every point; errors name the first failure.
    pub fn check_positive_definite(&self, points: &[ChartPoint]) -> Result<(), GeometryError> {
        for p in points {
            let g = self.evaluate_at(p)?;
            let m1 = g[0][0];
            let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            let m3 = determinant(&g);
            if !(m1 > 0.0 && m2 > 0.0 && m3 > 0.0) {
                return Err(GeometryError::NotPositiveDefinite {
                    metric: self.name.clone(),
                    point: *p,
                });
            }
        }
        Ok(())
    }

    /// Multiply every entry by `omega^2`. Points of the default grid where
    /// `omega` is not positive are recorded as warnings in [`Metric::notes`].
    pub fn conformal_rescale(&self, omega: &Expr) -> Metric {
        let factor = omega.clone().powi(2);
        let mut out = self.clone();
        for k in 0..6 {
            out.entries[k] = (&factor * &self.entries[k]).simplify();
        }
        out.name = format!("{} rescaled by ({omega})^2", self.name);
        let realized = self.realize(omega);
        let mut bad = Vec::new();
        for p in SampleGrid::default().points() {
            match realized.evaluate(&self.binding_at(&p)) {
                Ok(v) if v > 0.0 => {}
                Ok(v) => bad.push(format!("omega = {v} at {p:?}")),
                Err(e) => bad.push(format!("omega undefined at {p:?}: {e}")),
            }
        }
        if !bad.is_empty() {
            out.notes.push(format!(
                "warning: conformal factor not positive at {} sample point(s); first: {}",
                bad.len(),
                bad[0]
            ));
        }
        out
    }

    /// Entry-by-entry structural equality after simplification.
    pub fn same_entries(&self, other: &Metric) -> bool {
        (0..6).all(|k| self.entries[k].simplify() == other.entries[k].simplify())
    }

    /// Replace parameter symbols by exact constants for the given values.
    pub fn with_params_substituted(&self, values: &BTreeMap<String, Expr>) -> Metric {
        let mut out = self.clone();
        for k in 0..6 {
            out.entries[k] = self.entries[k].substitute(values).simplify();
        }
        for name in values.keys() {
            out.params.remove(name);
        }
        out
    }
}

pub(crate) fn determinant<T: Scalar>(g: &[[T; 3]; 3]) -> T {
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

/// Cofactor inverse of a 3x3 matrix.
pub(crate) fn inverse<T: Scalar>(g: &[[T; 3]; 3]) -> Option<[[T; 3]; 3]> {
    let det = determinant(g);
    if det.is_zero() || !det.is_finite() {
        return None;
    }
    let mut inv = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, d) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (g[a][c] * g[b][d] - g[a][d] * g[b][c]) / det;
        }
    }
    Some(inv)
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_diagonal() {
            return write!(
                f,
                "{}: diag({}, {}, {})",
                self.name,
                self.g(0, 0),
                self.g(1, 1),
                self.g(2, 2)
            );
        }
        write!(f, "{}: [", self.name)?;
        for i in 0..3 {
            for j in 0..3 {
                if i + j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.g(i, j))?;
            }
        }
        f.write_str("]")
    }
}
