use dynlab_core::geometry::metric_catalog;
use dynlab_core::grid::SampleGrid;
use dynlab_core::induction::{
    check_theorem1, check_theorem2, conformal_transform_field, corollary_metric, solenoidal_residual, stretching_term,
    theorem1_fixture, theorem2_counter_fixture, theorem2_fixture, FrameVector, SolenoidalVariant, TubeFieldSet,
};
use dynlab_core::symcore::{parse_expr, Expr};
use proptest::prelude::*;

fn e(t: &str) -> Expr {
    parse_expr(t).unwrap()
}

/// Axisymmetric profiles built from a few r-only shapes.
fn radial() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(e("r")),
        Just(e("1 + r^2")),
        Just(e("exp(-r)")),
        Just(e("sin(r) + 2")),
        Just(e("r*cos(theta_R)")),
        (-3i64..=3).prop_map(Expr::int),
    ]
}

fn axisymmetric() -> impl Strategy<Value = TubeFieldSet> {
    (radial(), radial(), radial(), radial(), radial(), radial(), 1u32..20).prop_map(|(bt, bs, vt, vs, w, k, tau)| {
        TubeFieldSet {
            b_theta: bt,
            b_s: bs,
            v_theta: vt,
            v_s: vs,
            omega: Expr::int(4) + w.powi(2),
            k: Expr::int(4) + k.powi(2),
            ..TubeFieldSet::default()
        }
        .with_param("tau0", tau as f64 / 10.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn axisymmetric_fields_are_annihilated(f in axisymmetric()) {
        let st = stretching_term(&f).unwrap();
        let conf = solenoidal_residual(&f, SolenoidalVariant::Conformal).unwrap();
        let piece = solenoidal_residual(&f, SolenoidalVariant::Piecewise).unwrap();
        for p in SampleGrid::default().points() {
            let b = f.binding_at(&p);
            for c in st.components.iter().chain([&conf, &piece]) {
                let v = c.evaluate(&b).unwrap();
                prop_assert!(v.abs() < 1e-12, "{c} = {v} at {p:?}");
            }
        }
    }

    #[test]
    fn stretching_is_linear_in_b(f in axisymmetric(), phase in 0.0f64..1.0) {
        // Break axisymmetry so the term is generically nonzero.
        let f = TubeFieldSet {
            omega: &f.omega + e("sin(s)/10") + Expr::from_f64(phase).unwrap(),
            v_theta: &f.v_theta + e("cos(s)"),
            ..f
        };
        let once = stretching_term(&f).unwrap();
        let twice = stretching_term(&f.scale_b(&Expr::int(2))).unwrap();
        for p in SampleGrid::default().points() {
            let b = f.binding_at(&p);
            for (a, c) in once.components.iter().zip(&twice.components) {
                let (x, y) = (a.evaluate(&b).unwrap(), c.evaluate(&b).unwrap());
                prop_assert!((2.0 * x - y).abs() <= 1e-10 * (1.0f64).max(y.abs()));
            }
        }
    }

    #[test]
    fn field_transform_composes(a in radial(), b in radial()) {
        let w1 = Expr::int(2) + a.powi(2);
        let w2 = Expr::int(1) + b.powi(2);
        let v = FrameVector::new(e("r"), e("sin(s)"), e("1"));
        let stepwise = conformal_transform_field(&conformal_transform_field(&v, &w1), &w2);
        let direct = conformal_transform_field(&v, &(&w1 * &w2));
        prop_assert_eq!(stepwise, direct);
    }
}

#[test]
fn theorem_fixtures() {
    let grid = SampleGrid::default();
    let t1 = check_theorem1(&theorem1_fixture(), &grid).unwrap();
    assert!(t1.pass && t1.max_abs < 1e-12);
    let t2 = check_theorem2(&theorem2_fixture(), &grid).unwrap();
    assert!(t2.pass && t2.max_abs < 1e-12);
    let bad = check_theorem2(&theorem2_counter_fixture(), &grid).unwrap();
    assert!(!bad.pass);
    assert_eq!(bad.verdict, "violation: nonzero residual");
}

#[test]
fn corollary_matches_catalog() {
    let c = corollary_metric(1.0, 1.0).unwrap();
    assert!(c.holds());
    assert!(c.metric.same_entries(&metric_catalog("non-dynamo-tube").unwrap()));
    let g = c.metric.evaluate_at(&[2.0, 0.0, 0.0]).unwrap();
    assert_eq!([g[0][0], g[1][1], g[2][2]], [0.25, 1.0, 1.0]);
}
