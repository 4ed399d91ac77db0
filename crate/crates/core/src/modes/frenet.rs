use std::collections::BTreeMap;

use serde::Serialize;

use crate::symcore::Expr;

/// Time derivative of one frame vector as a combination of frame vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameDerivative {
    pub of: String,
    pub terms: BTreeMap<String, Expr>,
}

impl FrameDerivative {
    fn new(of: &str, terms: Vec<(&str, Expr)>) -> FrameDerivative {
        FrameDerivative {
            of: of.to_string(),
            terms: terms
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.simplify()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Coefficient along `basis`, zero when absent.
    pub fn component(&self, basis: &str) -> Expr {
        self.terms.get(basis).cloned().unwrap_or_else(Expr::zero)
    }
}

/// Moving-frame rules of the helical tube, over the symbols `frenet_kappa`,
/// `kappa_prime`, `tau`, `omega0`, `tau0` and `theta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrenetFrame {
    pub rules: Vec<FrameDerivative>,
}

impl Default for FrenetFrame {
    fn default() -> Self {
        let s = Expr::sym;
        FrenetFrame {
            rules: vec![
                FrameDerivative::new(
                    "t",
                    vec![("b", s("kappa_prime")), ("n", -(s("frenet_kappa") * s("tau")))],
                ),
                FrameDerivative::new("n", vec![("t", s("frenet_kappa") * s("tau"))]),
                FrameDerivative::new("b", vec![("t", -s("kappa_prime"))]),
                FrameDerivative::new(
                    "e_theta",
                    vec![("e_r", -s("omega0")), ("t", -(s("theta").sin() * s("tau0").powi(2)))],
                ),
            ],
        }
    }
}

impl FrenetFrame {
    pub fn derivative_of(&self, v: &str) -> Option<&FrameDerivative> {
        self.rules.iter().find(|r| r.of == v)
    }
}
