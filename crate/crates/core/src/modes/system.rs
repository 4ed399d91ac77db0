use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::{Classification, GrowthResult, ModesError, NamedValue, MARGINAL_TOLERANCE};
use crate::symcore::{parse_expr, Binding, Expr};

/// Angles at which the mode equations must hold simultaneously.
pub const THETA_SAMPLES: [f64; 4] = [0.3, 0.7, FRAC_PI_2, 2.0];

/// Torsion values standing in for the weak-torsion limit.
pub const WEAK_TORSION_EPS: [f64; 2] = [1e-2, 1e-3];

/// Inputs of the scalar mode system. Magnetic components are
/// `B0 * exp(gamma t)` and the equations are evaluated at `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeParams {
    /// Fixed growth rate; `None` when it is the unknown.
    pub gamma: Option<f64>,
    pub omega0: f64,
    pub tau0: f64,
    pub theta: f64,
    pub r: f64,
    /// Conformal factor Ω̂(r)·e^{γt}, in `r`, `t`, `gamma` and `params`.
    pub omega_form: Expr,
    pub params: BTreeMap<String, f64>,
    pub b0_theta: f64,
    pub b0_s: f64,
}

impl Default for ModeParams {
    fn default() -> Self {
        ModeParams {
            gamma: None,
            omega0: 0.0,
            tau0: 1e-3,
            theta: 0.7,
            r: 1.0,
            omega_form: parse_expr("Omega0/r*exp(gamma*t)").expect("well formed"),
            params: BTreeMap::from([("Omega0".to_string(), 1.0)]),
            b0_theta: 1.0,
            b0_s: 1.0,
        }
    }
}

struct System {
    names: [&'static str; 3],
    exprs: [Expr; 3],
}

/// Full and weak-torsion equation sets as expressions.
fn equations(omega_form: &Expr, weak: bool) -> System {
    let s = Expr::sym;
    let gamma = s("gamma");
    let growth = (s("gamma") * s("t")).exp();
    let b_theta = s("B0_theta") * &growth;
    let b_s = s("B0_s") * &growth;
    let rate = Expr::div(omega_form.differentiate("t"), omega_form.clone()).simplify();
    let pre = Expr::pow(omega_form * s("r"), Expr::int(-1));
    let (sin, cos) = (s("theta").sin(), s("theta").cos());
    let tau2 = s("tau0").powi(2);
    let bracket1 = (&rate - &gamma) * &sin - s("omega0") * &cos;
    let bracket2 = (&rate - &gamma) * &cos - s("omega0") * &sin;
    let e1 = &pre * bracket1 * &b_theta;
    let e2 = &pre * bracket2 * &b_theta;
    if weak {
        System {
            names: ["poloidal (weak torsion)", "binormal", "axial (weak torsion)"],
            exprs: [e1.simplify(), e2.simplify(), (gamma * b_s).simplify()],
        }
    } else {
        System {
            names: ["poloidal", "binormal", "axial"],
            exprs: [
                (e1 + &tau2 * &b_s).simplify(),
                e2.simplify(),
                (pre * b_theta * tau2 * sin - gamma * b_s).simplify(),
            ],
        }
    }
}

impl ModeParams {
    fn binding(&self, gamma: f64, theta: f64, tau0: f64) -> Binding<f64> {
        let mut b: Binding<f64> = self.params.iter().map(|(k, v)| (k.clone(), *v)).collect();
        for (k, v) in [
            ("gamma", gamma),
            ("omega0", self.omega0),
            ("tau0", tau0),
            ("theta", theta),
            ("r", self.r),
            ("t", 0.0),
            ("B0_theta", self.b0_theta),
            ("B0_s", self.b0_s),
        ] {
            b.set(k, v);
        }
        b
    }
}

/// The three scalar mode residuals at `p.theta` for the given γ (or
/// `p.gamma` when `gamma` is `None`, or 0 when both are absent).
pub fn scalar_mode_residuals(p: &ModeParams, gamma: Option<f64>) -> Result<[f64; 3], ModesError> {
    let g = gamma.or(p.gamma).unwrap_or(0.0);
    let sys = equations(&p.omega_form, false);
    let b = p.binding(g, p.theta, p.tau0);
    let mut out = [0.0; 3];
    for (o, e) in out.iter_mut().zip(&sys.exprs) {
        *o = e.evaluate(&b)?;
    }
    Ok(out)
}

/// Least-squares solve of an affine-in-γ system over the θ samples.
struct Solve {
    gamma: Option<f64>,
    /// Max residual, normalised by the amplitude scale.
    residual: f64,
    classification: Classification,
    residuals: Vec<NamedValue>,
    affine: bool,
}

fn solve(p: &ModeParams, sys: &System, tau0: f64) -> Result<Solve, ModesError> {
    let scale = p.b0_theta.abs().max(p.b0_s.abs());
    let mut rows = Vec::new();
    let mut affine = true;
    for theta in THETA_SAMPLES {
        for (name, e) in sys.names.iter().zip(&sys.exprs) {
            let at = |g: f64| e.evaluate(&p.binding(g, theta, tau0));
            let (f0, f1, f2) = (at(0.0)?, at(1.0)?, at(2.0)?);
            let slope = f1 - f0;
            if ((f2 - f0) - 2.0 * slope).abs() > 1e-9 * (1.0 + f0.abs() + slope.abs()) {
                affine = false;
            }
            rows.push((format!("{name} (theta={theta})"), f0, slope));
        }
    }
    if scale == 0.0 {
        return Ok(Solve {
            gamma: None,
            residual: 0.0,
            classification: Classification::Indeterminate,
            residuals: rows.iter().map(|(n, a, _)| NamedValue::new(n, *a)).collect(),
            affine,
        });
    }
    let sbb: f64 = rows.iter().map(|(_, _, b)| (b / scale).powi(2)).sum();
    let sab: f64 = rows.iter().map(|(_, a, b)| a * b / (scale * scale)).sum();
    let max_a = rows.iter().map(|(_, a, _)| (a / scale).abs()).fold(0.0, f64::max);
    if sbb.sqrt() < 1e-12 {
        let classification = if max_a < MARGINAL_TOLERANCE {
            Classification::Indeterminate
        } else {
            Classification::Inconsistent
        };
        return Ok(Solve {
            gamma: None,
            residual: max_a,
            classification,
            residuals: rows.iter().map(|(n, a, _)| NamedValue::new(n, *a)).collect(),
            affine,
        });
    }
    let gamma = -sab / sbb;
    let residuals: Vec<NamedValue> = rows.iter().map(|(n, a, b)| NamedValue::new(n, a + b * gamma)).collect();
    let residual = residuals.iter().map(|r| (r.value / scale).abs()).fold(0.0, f64::max);
    let classification = if residual > MARGINAL_TOLERANCE {
        Classification::Inconsistent
    } else if gamma.abs() < MARGINAL_TOLERANCE {
        Classification::Marginal
    } else if gamma > 0.0 {
        // The mode system is ideal, so positive growth survives η → 0.
        Classification::Fast
    } else {
        Classification::Decaying
    };
    Ok(Solve {
        gamma: Some(gamma),
        residual,
        classification,
        residuals,
        affine,
    })
}

/// Scaling of the full system as torsion shrinks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakTorsionCheck {
    pub eps: Vec<f64>,
    /// Least-squares γ of the full system at τ0 = ε.
    pub gamma_full: Vec<f64>,
    /// Max normalised residual of the full system at that γ.
    pub residual_full: Vec<f64>,
    /// c = |γ(ε₁)| / ε₁² from the largest ε.
    pub fitted_c: f64,
    /// Observed exponent p in |γ| ∝ ε^p, when γ is not identically zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_exponent: Option<f64>,
    pub passes: bool,
}

fn exponent(y1: f64, y2: f64, x1: f64, x2: f64) -> Option<f64> {
    (y1.abs() > 0.0 && y2.abs() > 0.0).then(|| (y1.abs() / y2.abs()).ln() / (x1 / x2).ln())
}

fn weak_torsion_check(p: &ModeParams) -> Result<WeakTorsionCheck, ModesError> {
    let sys = equations(&p.omega_form, false);
    let mut gamma_full = Vec::new();
    let mut residual_full = Vec::new();
    for eps in WEAK_TORSION_EPS {
        let s = solve(p, &sys, eps)?;
        gamma_full.push(s.gamma.unwrap_or(0.0));
        residual_full.push(s.residual);
    }
    let [e1, e2] = WEAK_TORSION_EPS;
    let fitted_c = gamma_full[0].abs() / (e1 * e1);
    let gamma_exponent = exponent(gamma_full[0], gamma_full[1], e1, e2);
    let residual_exponent = exponent(residual_full[0], residual_full[1], e1, e2);
    let bounded = gamma_full[1].abs() <= fitted_c * e2 * e2 * (1.0 + 1e-6) + 1e-300;
    let quadratic = gamma_exponent.is_none_or(|x| (x - 2.0).abs() < 0.05);
    Ok(WeakTorsionCheck {
        eps: WEAK_TORSION_EPS.to_vec(),
        gamma_full,
        residual_full,
        fitted_c,
        gamma_exponent,
        residual_exponent,
        passes: bounded && quadratic,
    })
}

/// Solve the mode system for a single real γ valid at every θ sample.
/// With `weak_torsion`, the τ0² couplings are dropped (evaluated at
/// τ0 = `p.tau0`) and the full system's ε² scaling is reported alongside.
pub fn marginal_mode_solve(p: &ModeParams, weak_torsion: bool) -> Result<GrowthResult, ModesError> {
    let sys = equations(&p.omega_form, weak_torsion);
    let s = solve(p, &sys, p.tau0)?;
    let mut notes = Vec::new();
    if !s.affine {
        notes.push("residuals are not affine in gamma; least squares is approximate".to_string());
    }
    if s.classification == Classification::Marginal {
        let static_form = p.omega_form.substitute_one("gamma", &Expr::zero()).simplify();
        let dt = static_form.differentiate("t");
        let dr = (Expr::sym("r") * &static_form).differentiate("r");
        notes.push(format!(
            "gamma = 0 leaves Omega = {static_form}: d_t Omega = {dt}, d_r(r Omega) = {dr}"
        ));
    }
    let weak = if weak_torsion {
        Some(weak_torsion_check(p)?)
    } else {
        None
    };
    Ok(GrowthResult {
        // `+ 0.0` folds a signed zero from the fit into 0.
        gamma: s.gamma.unwrap_or(f64::NAN) + 0.0,
        gamma_im: 0.0,
        classification: s.classification,
        residuals: s.residuals,
        provenance: format!(
            "{} mode system, tau0 = {}, omega0 = {}, B0 = ({}, {}), r = {}, theta samples {:?}",
            if weak_torsion { "weak-torsion" } else { "full" },
            p.tau0,
            p.omega0,
            p.b0_theta,
            p.b0_s,
            p.r,
            THETA_SAMPLES
        ),
        notes,
        weak_torsion: weak,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_bracket_vanishes() {
        let p = ModeParams {
            tau0: 0.3,
            ..ModeParams::default()
        };
        for g in [-0.5, 0.0, 0.8] {
            let [r1, r2, r3] = scalar_mode_residuals(&p, Some(g)).unwrap();
            assert!((r1 - 0.09).abs() < 1e-15);
            assert_eq!(r2, 0.0);
            assert!((r3 - (0.09 * 0.7f64.sin() - g)).abs() < 1e-15);
        }
    }

    #[test]
    fn vacuum_residuals_vanish() {
        let p = ModeParams {
            b0_theta: 0.0,
            b0_s: 0.0,
            omega0: 0.4,
            ..ModeParams::default()
        };
        assert_eq!(scalar_mode_residuals(&p, Some(1.0)).unwrap(), [0.0; 3]);
        assert_eq!(
            marginal_mode_solve(&p, true).unwrap().classification,
            Classification::Indeterminate
        );
    }

    #[test]
    fn outcomes() {
        let marginal = marginal_mode_solve(&ModeParams::default(), true).unwrap();
        assert_eq!(marginal.classification, Classification::Marginal);
        assert!(marginal.gamma.abs() < 1e-10);
        assert!(marginal.weak_torsion.as_ref().unwrap().passes);

        let no_toroidal = ModeParams {
            b0_s: 0.0,
            ..ModeParams::default()
        };
        assert_eq!(
            marginal_mode_solve(&no_toroidal, true).unwrap().classification,
            Classification::Indeterminate
        );

        let twisted = ModeParams {
            omega0: 0.3,
            ..ModeParams::default()
        };
        assert_eq!(
            marginal_mode_solve(&twisted, true).unwrap().classification,
            Classification::Inconsistent
        );
    }
}
