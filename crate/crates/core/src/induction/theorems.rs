use serde::Serialize;

use super::fields::TubeFieldSet;
use super::terms::{solenoidal_residual, stretching_term, SolenoidalVariant};
use super::InductionError;
use crate::geometry::{metric_catalog, Metric};
use crate::grid::{ChartPoint, SampleGrid};
use crate::symcore::{parse_expr, Expr};

/// Tolerance for residuals that should vanish symbolically.
pub const SYMBOLIC_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointValue {
    pub point: ChartPoint,
    /// `None` when evaluation failed at this point.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub name: String,
    pub expression: Expr,
    pub max_abs: f64,
    pub values: Vec<PointValue>,
}

impl ResidualEntry {
    fn evaluate(name: &str, expression: Expr, f: &TubeFieldSet, grid: &[ChartPoint]) -> ResidualEntry {
        let mut max_abs = 0.0f64;
        let values = grid
            .iter()
            .map(|p| {
                let value = expression.evaluate(&f.binding_at(p)).ok();
                max_abs = match value {
                    Some(v) if v.is_finite() => max_abs.max(v.abs()),
                    _ => f64::INFINITY,
                };
                PointValue { point: *p, value }
            })
            .collect();
        ResidualEntry {
            name: name.to_string(),
            expression,
            max_abs,
            values,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub check: String,
    pub tolerance: f64,
    pub pass: bool,
    pub max_abs: f64,
    pub verdict: String,
    pub assumptions: Vec<String>,
    pub flags: Vec<String>,
    pub residuals: Vec<ResidualEntry>,
}

impl ResidualReport {
    fn assemble(check: &str, residuals: Vec<ResidualEntry>) -> ResidualReport {
        let max_abs = residuals.iter().map(|r| r.max_abs).fold(0.0, f64::max);
        ResidualReport {
            check: check.to_string(),
            tolerance: SYMBOLIC_TOLERANCE,
            pass: max_abs < SYMBOLIC_TOLERANCE,
            max_abs,
            verdict: String::new(),
            assumptions: Vec::new(),
            flags: Vec::new(),
            residuals,
        }
    }

    pub fn residual(&self, name: &str) -> Option<&ResidualEntry> {
        self.residuals.iter().find(|r| r.name == name)
    }
}

fn e(text: &str) -> Expr {
    parse_expr(text).expect("fixture expressions are well formed")
}

/// Axisymmetric fields over the conformal tube.
pub fn theorem1_fixture() -> TubeFieldSet {
    TubeFieldSet {
        b_theta: e("r"),
        b_s: e("1"),
        v_theta: e("r^2"),
        v_s: e("1"),
        omega: e("1 + r^2"),
        k: Expr::one(),
        ..TubeFieldSet::default()
    }
    .with_param("tau0", 0.5)
}

/// Ω = Ω0/r, K = K0, no poloidal flow.
pub fn theorem2_fixture() -> TubeFieldSet {
    TubeFieldSet {
        b_theta: e("r"),
        b_s: e("1"),
        v_theta: Expr::zero(),
        v_s: e("1"),
        omega: e("Omega0/r"),
        k: e("K0"),
        ..TubeFieldSet::default()
    }
    .with_param("tau0", 0.5)
    .with_param("Omega0", 1.0)
    .with_param("K0", 1.0)
}

/// [`theorem2_fixture`] with the radially varying profile K = 1 − 0.1 r cos θ_R.
pub fn theorem2_counter_fixture() -> TubeFieldSet {
    TubeFieldSet {
        k: e("1 - 0.1*r*cos(theta_R)"),
        ..theorem2_fixture()
    }
}

/// Untwisting with a static conformal factor along the axis must annihilate
/// both the stretching term and the divergence in the conformal tube.
pub fn check_theorem1(f: &TubeFieldSet, grid: &SampleGrid) -> Result<ResidualReport, InductionError> {
    let pts = grid.points();
    let st = stretching_term(f)?;
    let div = solenoidal_residual(f, SolenoidalVariant::Conformal)?;
    let hyp_omega = Expr::div(f.omega.differentiate("s"), f.omega.clone()).simplify();
    let hyp_b = f.b_theta.differentiate("s");
    let mut residuals = vec![
        ResidualEntry::evaluate("hypothesis: d_s Omega / Omega", hyp_omega, f, &pts),
        ResidualEntry::evaluate("hypothesis: d_s B_theta", hyp_b, f, &pts),
    ];
    for (name, c) in ["stretching e_r", "stretching e_theta", "stretching t"]
        .iter()
        .zip(st.components)
    {
        residuals.push(ResidualEntry::evaluate(name, c, f, &pts));
    }
    residuals.push(ResidualEntry::evaluate("solenoidal (conformal)", div, f, &pts));
    let mut report = ResidualReport::assemble("theorem 1", residuals);
    report.assumptions.push(
        "d_s v_theta = 0 is also required for the stretching term to vanish; \
         the fields are taken axisymmetric"
            .to_string(),
    );
    let dsv = f.v_theta.differentiate("s");
    if !dsv.is_zero() {
        report
            .flags
            .push(format!("d_s v_theta = {dsv} is not identically zero"));
    }
    report.verdict = if report.pass {
        "slow dynamo class: stretching and divergence vanish".to_string()
    } else {
        "violation: nonzero residual".to_string()
    };
    Ok(report)
}

/// Stretching balances and divergence in the piecewise tube, under
/// untwisting. Reports any r or s dependence of K.
pub fn check_theorem2(f: &TubeFieldSet, grid: &SampleGrid) -> Result<ResidualReport, InductionError> {
    f.tau0()?;
    let pts = grid.points();
    let r = Expr::sym("r");
    let tau0 = Expr::sym("tau0");
    let ti = Expr::pow(tau0, Expr::int(-1));
    let (w, k) = (&f.omega, &f.k);
    let (bt, bs, vt, vs) = (&f.b_theta, &f.b_s, &f.v_theta, &f.v_s);
    let dr = |x: &Expr| x.differentiate("r");
    let ds = |x: &Expr| x.differentiate("s");
    let wk = w * k;

    let radial = Expr::div(dr(&(&r * w)), w.clone().powi(2)) * bt * vt + Expr::div(bs.clone(), wk.clone()) * vs * dr(k);
    let toroidal = Expr::div(bt.clone(), wk.clone()) * ds(w) * vs + Expr::div(bs.clone(), k.clone()) * ds(bt)
        - Expr::div(bs.clone(), &r * w) * &ti * ds(k);
    let poloidal = Expr::div(bt * vt, wk.clone())
        + Expr::div(bs.clone(), k.clone()) * (dr(k) - &ti * Expr::div(vs.clone(), w.clone()) * ds(k));
    let div = solenoidal_residual(f, SolenoidalVariant::Piecewise)?;

    let residuals = vec![
        ResidualEntry::evaluate("hypothesis: d_s B_theta", ds(bt), f, &pts),
        ResidualEntry::evaluate("radial stretching balance", radial.simplify(), f, &pts),
        ResidualEntry::evaluate("toroidal stretching balance", toroidal.simplify(), f, &pts),
        ResidualEntry::evaluate("poloidal stretching balance", poloidal.simplify(), f, &pts),
        ResidualEntry::evaluate("solenoidal (piecewise)", div, f, &pts),
    ];
    let mut report = ResidualReport::assemble("theorem 2", residuals);
    report.assumptions.push("untwisting: d_s B_theta = 0".to_string());
    let dk_r = ResidualEntry::evaluate("d_r K", dr(k), f, &pts);
    let dk_s = ResidualEntry::evaluate("d_s K", ds(k), f, &pts);
    let k_varies = dk_r.max_abs >= SYMBOLIC_TOLERANCE || dk_s.max_abs >= SYMBOLIC_TOLERANCE;
    for d in [&dk_r, &dk_s] {
        if d.max_abs >= SYMBOLIC_TOLERANCE {
            report
                .flags
                .push(format!("K is not constant: max |{}| = {:e}", d.name, d.max_abs));
        }
    }
    report.verdict = match (report.pass, k_varies) {
        (true, false) => "non-stretched tube".to_string(),
        (true, true) => "counterexample: K varies while every balance holds".to_string(),
        (false, _) => "violation: nonzero residual".to_string(),
    };
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryResult {
    pub metric: Metric,
    pub omega: Expr,
    /// ∂_r(Ω r), simplified.
    pub dr_omega_r: Expr,
}

impl CorollaryResult {
    pub fn holds(&self) -> bool {
        self.dr_omega_r.is_zero()
    }
}

/// Non-dynamo metric with the given Ω0 and K0, plus the radial constraint
/// that fixes Ω = Ω0/r.
pub fn corollary_metric(omega0: f64, k0: f64) -> Result<CorollaryResult, InductionError> {
    if !(omega0 > 0.0) {
        return Err(InductionError::NonPositive("Omega0", omega0));
    }
    if !(k0 > 0.0) {
        return Err(InductionError::NonPositive("K0", k0));
    }
    let mut metric = metric_catalog("non-dynamo-tube")?;
    metric.params.insert("Omega0".into(), omega0);
    metric.params.insert("K0".into(), k0);
    let omega = e("Omega0/r");
    let dr_omega_r = (&omega * Expr::sym("r")).differentiate("r");
    Ok(CorollaryResult {
        metric,
        omega,
        dr_omega_r,
    })
}
