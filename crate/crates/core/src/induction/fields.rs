use std::collections::BTreeMap;

use serde::Serialize;

use super::InductionError;
use crate::geometry::{parse_definition_file, GeometryError};
use crate::grid::ChartPoint;
use crate::symcore::{Binding, Expr};

/// Keys admitted in a field definition file.
pub const FIELD_KEYS: [&str; 6] = ["B_theta", "B_s", "v_theta", "v_s", "Omega", "K"];

/// Magnetic and flow components confined to the tube. Radial components
/// are not stored, so `B_r = v_r = 0` holds by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeFieldSet {
    pub b_theta: Expr,
    pub b_s: Expr,
    pub v_theta: Expr,
    pub v_s: Expr,
    pub omega: Expr,
    pub k: Expr,
    /// Parameter values, including the constant torsion `tau0`.
    pub params: BTreeMap<String, f64>,
}

impl Default for TubeFieldSet {
    fn default() -> Self {
        TubeFieldSet {
            b_theta: Expr::zero(),
            b_s: Expr::zero(),
            v_theta: Expr::zero(),
            v_s: Expr::zero(),
            omega: Expr::one(),
            k: Expr::one(),
            params: BTreeMap::new(),
        }
    }
}

impl TubeFieldSet {
    pub fn b_r(&self) -> Expr {
        Expr::zero()
    }

    pub fn v_r(&self) -> Expr {
        Expr::zero()
    }

    pub fn with_param(mut self, name: &str, value: f64) -> TubeFieldSet {
        self.params.insert(name.to_string(), value);
        self
    }

    /// Declared nonzero torsion.
    pub fn tau0(&self) -> Result<f64, InductionError> {
        match self.params.get("tau0") {
            None => Err(InductionError::MissingTorsion),
            Some(&0.0) => Err(InductionError::ZeroTorsion),
            Some(&t) => Ok(t),
        }
    }

    /// Parameters and chart coordinates at `point`, with `t = 0`.
    pub fn binding_at(&self, point: &ChartPoint) -> Binding<f64> {
        let mut b: Binding<f64> = self.params.iter().map(|(k, v)| (k.clone(), *v)).collect();
        b.set("r", point[0]);
        b.set("theta_R", point[1]);
        b.set("s", point[2]);
        b.set("t", 0.0);
        b
    }

    /// Multiply both magnetic components by `c`.
    pub fn scale_b(&self, c: &Expr) -> TubeFieldSet {
        let mut out = self.clone();
        out.b_theta = (c * &self.b_theta).simplify();
        out.b_s = (c * &self.b_s).simplify();
        out
    }
}

/// Components along `(e_r, e_theta, t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameVector {
    pub components: [Expr; 3],
}

impl FrameVector {
    pub const NAMES: [&'static str; 3] = ["e_r", "e_theta", "t"];

    pub fn new(e_r: Expr, e_theta: Expr, t: Expr) -> FrameVector {
        FrameVector {
            components: [e_r, e_theta, t],
        }
    }

    pub fn e_r(&self) -> &Expr {
        &self.components[0]
    }

    pub fn e_theta(&self) -> &Expr {
        &self.components[1]
    }

    pub fn t(&self) -> &Expr {
        &self.components[2]
    }
}

/// Field definition file. Missing field keys default to zero, `Omega`
/// and `K` to one.
pub fn parse_field_file(text: &str) -> Result<TubeFieldSet, GeometryError> {
    let def = parse_definition_file(text, &FIELD_KEYS, &["t"])?;
    let mut f = TubeFieldSet {
        params: def.params,
        ..TubeFieldSet::default()
    };
    for (key, e) in def.entries {
        let slot = match key.as_str() {
            "B_theta" => &mut f.b_theta,
            "B_s" => &mut f.b_s,
            "v_theta" => &mut f.v_theta,
            "v_s" => &mut f.v_s,
            "Omega" => &mut f.omega,
            _ => &mut f.k,
        };
        *slot = e;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_defaults() {
        let f = parse_field_file("param tau0 = 0.5\nB_s = 1\nK = 1 - 0.1*r*cos(theta_R)\n").unwrap();
        assert!(f.b_theta.is_zero());
        assert!(f.omega.is_one());
        assert_eq!(f.tau0().unwrap(), 0.5);
        assert!(f.b_r().is_zero() && f.v_r().is_zero());
    }

    #[test]
    fn torsion_must_be_nonzero() {
        let f = parse_field_file("param tau0 = 0\n").unwrap();
        assert_eq!(f.tau0(), Err(InductionError::ZeroTorsion));
        assert_eq!(TubeFieldSet::default().tau0(), Err(InductionError::MissingTorsion));
    }

    #[test]
    fn unknown_key_is_rejected() {
        assert!(parse_field_file("B_r = 1\n").is_err());
        assert!(parse_field_file("B_s = q\n").is_err());
    }
}
