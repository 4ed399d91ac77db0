use super::fields::{FrameVector, TubeFieldSet};
use super::InductionError;
use crate::geometry::Metric;
use crate::symcore::Expr;

fn ds(e: &Expr) -> Expr {
    e.differentiate("s")
}

fn tau_inv() -> Expr {
    Expr::pow(Expr::sym("tau0"), Expr::int(-1))
}

/// Stretching term (B·∇)v for a confined field in the conformal tube,
/// with A = B_θ τ0⁻¹ v_θ − B_s v_s and C = −τ0⁻¹ ∂_s v_θ + r v_s ∂_sΩ/Ω.
pub fn stretching_term(f: &TubeFieldSet) -> Result<FrameVector, InductionError> {
    f.tau0()?;
    let r = Expr::sym("r");
    let ti = tau_inv();
    let w = &f.omega;
    let log_ds = Expr::div(ds(w), w.clone());
    let a = &f.b_theta * &ti * &f.v_theta - &f.b_s * &f.v_s;
    let c = -(&ti * ds(&f.v_theta)) + &r * &f.v_s * &log_ds;
    let e_r = &log_ds * a;
    let e_theta = Expr::div(f.b_theta.clone(), w * &r) * c
        + Expr::div(f.b_s.clone(), w.clone()) * (&ti * &log_ds * &f.v_s + ds(&f.v_theta));
    let t = -(Expr::div(f.b_theta.clone(), w.clone()) * &f.v_theta * &log_ds
        + Expr::div(f.b_s.clone(), w.clone()) * &ti * &f.v_theta * &log_ds);
    Ok(FrameVector::new(e_r.simplify(), e_theta.simplify(), t.simplify()))
}

/// Metric context for the divergence condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolenoidalVariant {
    /// Ω²(dr² + r²dθ² + ds²).
    Conformal,
    /// Ω²(dr² + r²dθ²) + K²ds².
    Piecewise,
}

/// Divergence residual of B in the selected metric context.
pub fn solenoidal_residual(f: &TubeFieldSet, variant: SolenoidalVariant) -> Result<Expr, InductionError> {
    let e = match variant {
        SolenoidalVariant::Conformal => {
            f.tau0()?;
            let ti = tau_inv();
            (&f.b_theta * &ti - Expr::sym("r") * &f.b_s) * ds(&f.omega.clone().ln())
                + f.omega.clone().powi(2) * ti * ds(&f.b_theta)
        }
        SolenoidalVariant::Piecewise => {
            (&f.b_theta - Expr::sym("tau0") * &f.b_s) * ds(&(&f.k * &f.omega).ln()) - ds(&f.b_theta)
        }
    };
    Ok(e.simplify())
}

/// Metric with the field set's Ω and K substituted for opaque functions.
fn context_metric(g: &Metric, f: &TubeFieldSet) -> Metric {
    let params = ["r".to_string(), "s".to_string()];
    let mut out = g.clone();
    for i in 0..3 {
        for j in i..3 {
            let e = g
                .g(i, j)
                .substitute_function("Omega", &params, &f.omega)
                .substitute_function("K", &params, &f.k);
            out.set(i, j, e);
        }
    }
    out
}

/// `∂_tΩ + (1/3)(v·∇)Ω` when `include_time`, else `(v·∇)Ω`. Flow
/// components are taken as physical, so v^i = v_i / sqrt(g_ii) in the
/// (diagonal) metric context.
pub fn advection_constraint_residual(f: &TubeFieldSet, g: &Metric, include_time: bool) -> Result<Expr, InductionError> {
    if !g.is_diagonal() {
        return Err(InductionError::NonDiagonalMetric);
    }
    let g = context_metric(g, f);
    let comps = [(1, "theta_R", &f.v_theta), (2, "s", &f.v_s)];
    let mut terms = Vec::new();
    for (i, coord, v) in comps {
        if v.is_zero() {
            continue;
        }
        let scale = g.g(i, i).clone().sqrt();
        terms.push(Expr::div(v.clone(), scale) * f.omega.differentiate(coord));
    }
    let spatial = Expr::add(terms);
    let e = if include_time {
        f.omega.differentiate("t") + Expr::ratio(1, 3) * spatial
    } else {
        spatial
    };
    Ok(e.simplify())
}

/// B' = ΩB componentwise.
pub fn conformal_transform_field(b: &FrameVector, omega: &Expr) -> FrameVector {
    FrameVector {
        components: b.components.clone().map(|c| (omega * c).simplify()),
    }
}
