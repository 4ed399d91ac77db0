use dynlab_core::ledger::{curvature_claims, run_ledger, LedgerConfig};
use dynlab_core::report::{SignConvention, Verdict};

#[test]
fn registered_verdicts() {
    let report = run_ledger(&LedgerConfig::default());
    assert!(report.claims.len() >= 8);
    let verdict = |id: &str| report.get(id).unwrap_or_else(|| panic!("missing {id}")).verdict;
    for id in [
        "Eq.10",
        "Eq.17:engine",
        "Eq.18",
        "Eq.22",
        "Eq.40a",
        "Eq.40a:K1",
        "Eq.41a:K2",
        "Eq.58",
        "Eq.60",
    ] {
        assert_eq!(verdict(id), Verdict::Confirmed, "{id}");
    }
    for id in ["Eq.17", "Eq.40b", "Eq.40c", "Eq.41b", "Eq.42", "Eq.44", "Eq.45"] {
        assert_eq!(verdict(id), Verdict::Discrepant, "{id}");
    }
    for c in &report.claims {
        assert!(c.samples.len() >= 3, "{}", c.id);
    }
    let singular_claim = report.get("Eq.45").unwrap();
    let anchor = &singular_claim.samples[0];
    assert_eq!(anchor.point["r"], 1.0);
    assert_eq!((anchor.paper_value, anchor.computed_value), (-3.0, 0.0));
    let ode_claim = report.get("Eq.17").unwrap();
    let at1 = ode_claim.samples.iter().find(|s| s.point["r"] == 1.0).unwrap();
    assert!((at1.computed_value - 3.0).abs() < 1e-12);
    assert_eq!(
        report.get("Eq.40a").unwrap().sign_convention,
        Some(SignConvention::AsStated)
    );
}

#[test]
fn ids_are_sorted_and_unique() {
    let report = run_ledger(&LedgerConfig::default());
    let ids: Vec<_> = report.claims.iter().map(|c| c.id.clone()).collect();
    let mut dedup = ids.clone();
    dedup.dedup();
    assert_eq!(ids, dedup);
}

#[test]
fn curvature_subsets() {
    let cfg = LedgerConfig::default();
    let ricca = curvature_claims("ricca-tube", &cfg);
    assert_eq!(ricca.claims.len(), 5);
    let nd = curvature_claims("non-dynamo-tube", &cfg);
    assert_eq!(nd.get("Eq.45").unwrap().verdict, Verdict::Discrepant);
    assert!(curvature_claims("conformal-tube", &cfg).claims.is_empty());
}

#[test]
fn seed_changes_points_but_not_verdicts() {
    let a = run_ledger(&LedgerConfig {
        seed: 1,
        ..LedgerConfig::default()
    });
    let b = run_ledger(&LedgerConfig {
        seed: 2,
        ..LedgerConfig::default()
    });
    assert_ne!(a, b);
    for (x, y) in a.claims.iter().zip(&b.claims) {
        assert_eq!((x.id.as_str(), x.verdict), (y.id.as_str(), y.verdict));
    }
}
