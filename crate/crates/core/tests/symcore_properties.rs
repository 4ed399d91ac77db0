use dynlab_core::symcore::{numeric_derivative, parse_expr, Binding, Expr};
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "z"];

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0usize..3).prop_map(|i| Expr::sym(VARS[i])),
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Expr::ratio(n, d)),
    ]
}

/// Random trees whose singularities stay away from the sampling box.
fn tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 48, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::add),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::mul),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, Expr::int(2) + b.sin())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, Expr::one() + b.powi(2))),
            (inner.clone(), 2i64..=3).prop_map(|(a, n)| a.powi(n)),
            inner
                .clone()
                .prop_map(|a| Expr::pow(Expr::one() + a.powi(2), Expr::ratio(-1, 2))),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            inner.clone().prop_map(|a| a.sin().exp()),
            inner.clone().prop_map(|a| (Expr::one() + a.powi(2)).ln()),
            inner.clone().prop_map(|a| (Expr::int(2) + a.cos()).sqrt()),
        ]
    })
}

fn binding() -> impl Strategy<Value = Binding<f64>> {
    (0.5f64..1.5, 0.5f64..1.5, 0.5f64..1.5).prop_map(|(x, y, z)| Binding::from_pairs(&[("x", x), ("y", y), ("z", z)]))
}

fn well_conditioned(e: &Expr, b: &Binding<f64>) -> bool {
    match e.evaluate(b) {
        Ok(v) => v.abs() < 1e4,
        Err(_) => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symbolic_derivative_matches_stencil(e in tree(), b in binding(), v in 0usize..3) {
        prop_assume!(well_conditioned(&e, &b));
        let var = VARS[v];
        let d = e.differentiate(var);
        let symbolic = d.evaluate(&b).unwrap();
        let x = b.get(var).unwrap();
        let numeric = numeric_derivative(&e, var, &b, 1e-4 * x.abs().max(1.0)).unwrap();
        prop_assert!(
            (symbolic - numeric).abs() < 1e-6 * (1.0 + symbolic.abs()),
            "d/d{var} {e}: symbolic {symbolic} numeric {numeric}"
        );
    }

    #[test]
    fn simplify_preserves_value(e in tree(), b in binding()) {
        prop_assume!(well_conditioned(&e, &b));
        let before = e.evaluate(&b).unwrap();
        let after = e.simplify().evaluate(&b).unwrap();
        prop_assert!(
            (before - after).abs() < 1e-10 * (1.0 + before.abs()),
            "{e}: {before} vs {after}"
        );
    }

    #[test]
    fn expand_preserves_value(e in tree(), b in binding()) {
        prop_assume!(well_conditioned(&e, &b));
        let before = e.evaluate(&b).unwrap();
        let after = e.expand().evaluate(&b).unwrap();
        prop_assert!((before - after).abs() < 1e-9 * (1.0 + before.abs()));
    }

    #[test]
    fn simplify_is_idempotent(e in tree()) {
        let once = e.simplify();
        prop_assert_eq!(once.simplify(), once);
    }

    #[test]
    fn render_parse_round_trip(e in tree()) {
        let text = e.to_string();
        let reparsed = parse_expr(&text).unwrap();
        prop_assert_eq!(&reparsed, &e, "rendered as {}", text);
        let simplified = e.simplify();
        let text = simplified.to_string();
        prop_assert_eq!(parse_expr(&text).unwrap(), simplified, "rendered as {}", text);
    }
}
