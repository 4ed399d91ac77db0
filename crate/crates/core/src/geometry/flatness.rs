use serde::Serialize;

use super::curvature::riemann;
use super::metric::Metric;
use super::oracle::NumericMetric;
use super::GeometryError;
use crate::symcore::{Binding, Expr, FunctionDef};

/// Radii at which candidate solutions are tested.
pub const FLATNESS_RADII: [f64; 3] = [0.5, 1.0, 2.0];

/// A concrete conformal factor Ω(r) to test.
#[derive(Debug, Clone, Serialize)]
pub struct FlatnessCandidate {
    pub label: String,
    pub omega: Expr,
}

impl FlatnessCandidate {
    pub fn new(label: &str, omega: Expr) -> FlatnessCandidate {
        FlatnessCandidate {
            label: label.to_string(),
            omega,
        }
    }

    /// Ω = C·r^a.
    pub fn power(c: f64, a: f64) -> FlatnessCandidate {
        let c_e = Expr::from_f64(c).expect("finite");
        let a_e = Expr::from_f64(a).expect("finite");
        FlatnessCandidate::new(&format!("C*r^a (C={c}, a={a})"), c_e * Expr::pow(Expr::sym("r"), a_e))
    }

    /// Candidates: Ω = 1, r, Ω0/r (Ω0 = 1) and three power laws.
    pub fn defaults() -> Vec<FlatnessCandidate> {
        let r = Expr::sym("r");
        let mut out = vec![
            FlatnessCandidate::new("Omega=1", Expr::one()),
            FlatnessCandidate::new("Omega=r", r.clone()),
            FlatnessCandidate::new("Omega=Omega0/r (Omega0=1)", Expr::div(Expr::one(), r)),
        ];
        for (c, a) in [(1.0, 1.0), (2.0, -1.0), (0.5, 0.3)] {
            out.push(FlatnessCandidate::power(c, a));
        }
        out
    }
}

/// Residuals of one candidate at one radius.
#[derive(Debug, Clone, Serialize)]
pub struct CandidateResidual {
    pub candidate: String,
    pub point: [f64; 3],
    /// Symbolic R_rθrθ of the rescaled metric.
    pub engine: f64,
    /// R_rθrθ from the finite-difference oracle.
    pub engine_fd: f64,
    /// r (ln Ω)'' + (ln Ω)'.
    pub reduced: f64,
    /// The printed ODE r F'' + F' − F' r / (2F), F = Ω².
    pub paper: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatnessReport {
    pub family: String,
    /// R_rθrθ for diag(Ω(r)², Ω(r)² r², 1), in Ω and its derivatives.
    pub engine_condition: Expr,
    /// Equivalent reduced form; engine = −r Ω² · reduced.
    pub reduced_condition: Expr,
    pub paper_condition: Expr,
    pub paper_text: String,
    pub residuals: Vec<CandidateResidual>,
}

impl FlatnessReport {
    pub fn for_candidate<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a CandidateResidual> {
        self.residuals.iter().filter(move |c| c.candidate == label)
    }
}

fn omega_r() -> Expr {
    Expr::function_of("Omega", &["r"])
}

fn family(omega: &Expr) -> Metric {
    let w2 = omega.clone().powi(2);
    Metric::diagonal(
        "conformal-polar",
        [w2.clone(), w2 * Expr::sym("r").powi(2), Expr::one()],
    )
}

/// r F'' + F' − F' r / (2F) with F = Ω(r)².
pub fn paper_flatness_ode(omega: &Expr) -> Expr {
    let r = Expr::sym("r");
    let f = omega.clone().powi(2);
    let f1 = f.differentiate("r");
    let f2 = f1.differentiate("r");
    (&r * f2 + &f1 - Expr::div(&f1 * &r, Expr::int(2) * f)).simplify()
}

/// r (ln Ω)'' + (ln Ω)'.
pub fn reduced_flatness(omega: &Expr) -> Expr {
    let l1 = omega.clone().ln().differentiate("r");
    (Expr::sym("r") * l1.differentiate("r") + l1).simplify()
}

/// Analyse flatness of the conformal-polar block Ω(r)²(dr² + r²dθ²) + ds².
pub fn flatness_condition(candidates: &[FlatnessCandidate]) -> Result<FlatnessReport, GeometryError> {
    let omega = omega_r();
    let engine_condition = riemann(&family(&omega))?.get(0, 1, 0, 1).clone();
    let reduced_condition = reduced_flatness(&omega);
    let paper_condition = paper_flatness_ode(&omega);
    let params = ["r".to_string()];
    let mut residuals = Vec::new();
    for cand in candidates {
        let def = FunctionDef {
            params: params.to_vec(),
            body: cand.omega.clone(),
        };
        let sub = |e: &Expr| e.substitute_function("Omega", &def.params, &def.body);
        let engine = sub(&engine_condition);
        let reduced = sub(&reduced_condition);
        let paper = sub(&paper_condition);
        let numeric = NumericMetric::new(&family(&cand.omega));
        for r in FLATNESS_RADII {
            let point = [r, 0.0, 0.0];
            let b = Binding::from_pairs(&[("r", r)]);
            residuals.push(CandidateResidual {
                candidate: cand.label.clone(),
                point,
                engine: engine.evaluate(&b)?,
                engine_fd: numeric.riemann(&point)?[9 + 1],
                reduced: reduced.evaluate(&b)?,
                paper: paper.evaluate(&b)?,
            });
        }
    }
    Ok(FlatnessReport {
        family: "diag(Omega(r)^2, Omega(r)^2 r^2, 1)".to_string(),
        engine_condition,
        reduced_condition,
        paper_condition,
        paper_text: "r(Omega^2)'' + (Omega^2)' - (1/(2 Omega^2)) (Omega^2)' r = 0".to_string(),
        residuals,
    })
}
