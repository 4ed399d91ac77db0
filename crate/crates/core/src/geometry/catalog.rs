use super::metric::Metric;
use super::GeometryError;
use crate::symcore::{Expr, FunctionDef, Parser};

/// Catalog keys, in a fixed order.
pub const CATALOG: [&str; 6] = [
    "flat-tube",
    "conformal-tube",
    "piecewise-tube",
    "non-dynamo-tube",
    "fast-dynamo-tube",
    "ricca-tube",
];

pub fn catalog_names() -> String {
    CATALOG.join(", ")
}

fn parse(text: &str) -> Expr {
    Parser::new()
        .with_functions(["Omega", "K"])
        .parse(text)
        .expect("catalog expressions are well formed")
}

/// Stand-in for the opaque conformal factor Ω(r, s).
pub fn omega_realization() -> FunctionDef {
    FunctionDef::new(&["r", "s"], parse("1 + 0.2*r*cos(s)"))
}

/// Stand-in for the opaque axial profile K(r, s).
pub fn k_realization() -> FunctionDef {
    FunctionDef::new(&["r", "s"], parse("1 + 0.1*r^2*sin(s)"))
}

/// Look up a catalog metric by key.
pub fn metric_catalog(name: &str) -> Result<Metric, GeometryError> {
    let m = match name {
        "flat-tube" => Metric::diagonal(name, [parse("1"), parse("r^2"), parse("1")]),
        "conformal-tube" => Metric::diagonal(
            name,
            [
                parse("Omega(r, s)^2"),
                parse("Omega(r, s)^2*r^2"),
                parse("Omega(r, s)^2"),
            ],
        )
        .with_function("Omega", omega_realization()),
        "piecewise-tube" => Metric::diagonal(
            name,
            [parse("Omega(r, s)^2"), parse("Omega(r, s)^2*r^2"), parse("K(r, s)^2")],
        )
        .with_function("Omega", omega_realization())
        .with_function("K", k_realization()),
        "non-dynamo-tube" => Metric::diagonal(name, [parse("Omega0^2/r^2"), parse("Omega0^2"), parse("K0^2")])
            .with_param("Omega0", 1.0)
            .with_param("K0", 1.0),
        "fast-dynamo-tube" => Metric::diagonal(name, [parse("r^2"), parse("r^4"), parse("1")]),
        "ricca-tube" => Metric::diagonal(
            name,
            [parse("1"), parse("r^2"), parse("(1 - kappa*r*cos(theta_R - tau0*s))^2")],
        )
        .with_param("kappa", 0.1)
        .with_param("tau0", 0.2),
        _ => return Err(GeometryError::UnknownMetric(name.to_string(), catalog_names())),
    };
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SampleGrid;
    use crate::symcore::parse_expr;
    use std::collections::BTreeMap;

    #[test]
    fn every_key_resolves_and_is_positive_definite() {
        let pts = SampleGrid::default().points();
        for name in CATALOG {
            let m = metric_catalog(name).unwrap();
            assert_eq!(m.name, name);
            assert!(m.is_diagonal());
            m.check_positive_definite(&pts).unwrap();
        }
        assert!(matches!(
            metric_catalog("sphere"),
            Err(GeometryError::UnknownMetric(..))
        ));
    }

    #[test]
    fn non_dynamo_defaults() {
        let m = metric_catalog("non-dynamo-tube").unwrap();
        let values: BTreeMap<String, Expr> = m
            .params
            .iter()
            .map(|(k, v)| (k.clone(), Expr::from_f64(*v).unwrap()))
            .collect();
        let want = Metric::diagonal("x", [parse_expr("1/r^2").unwrap(), Expr::one(), Expr::one()]);
        assert!(m.with_params_substituted(&values).same_entries(&want));
    }

    #[test]
    fn fast_dynamo_entries() {
        let m = metric_catalog("fast-dynamo-tube").unwrap();
        assert_eq!(m.g(1, 1), &parse_expr("r^4").unwrap());
        assert!(m.g(2, 2).is_one());
    }
}
