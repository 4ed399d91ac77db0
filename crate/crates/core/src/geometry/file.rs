use std::collections::BTreeMap;

use super::metric::{Chart, Metric, COORDS};
use super::GeometryError;
use crate::symcore::{parse_expr, Binding, Expr};

/// Parsed `key = value` definition file shared by metric and field inputs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DefinitionFile {
    pub coords: Option<Vec<String>>,
    pub params: BTreeMap<String, f64>,
    pub entries: BTreeMap<String, Expr>,
}

fn err(line: usize, message: impl Into<String>) -> GeometryError {
    GeometryError::File {
        line,
        message: message.into(),
    }
}

/// Parse definition text. `keys` lists the admissible entry names;
/// `symbols` lists names besides coordinates and declared parameters that
/// expressions may mention.
pub fn parse_definition_file(text: &str, keys: &[&str], symbols: &[&str]) -> Result<DefinitionFile, GeometryError> {
    let mut out = DefinitionFile::default();
    let mut lines_of: BTreeMap<String, usize> = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected `key = value`, found `{line}`")))?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        if lhs == "coord" {
            let names: Vec<&str> = rhs.split(',').map(str::trim).collect();
            Chart::from_names(&names).map_err(|e| err(line_no, e.to_string()))?;
            out.coords = Some(names.into_iter().map(String::from).collect());
        } else if let Some(name) = lhs.strip_prefix("param ") {
            let name = name.trim();
            let value = parse_expr(rhs)
                .map_err(|source| GeometryError::Parse { line: line_no, source })?
                .evaluate(&Binding::<f64>::new())
                .map_err(|e| err(line_no, format!("parameter `{name}`: {e}")))?;
            out.params.insert(name.to_string(), value);
        } else {
            if !keys.contains(&lhs) {
                return Err(err(
                    line_no,
                    format!("unknown key `{lhs}`; expected one of {}", keys.join(", ")),
                ));
            }
            if out.entries.contains_key(lhs) {
                return Err(err(line_no, format!("duplicate key `{lhs}`")));
            }
            let e = parse_expr(rhs).map_err(|source| GeometryError::Parse { line: line_no, source })?;
            out.entries.insert(lhs.to_string(), e);
            lines_of.insert(lhs.to_string(), line_no);
        }
    }
    for (key, e) in &out.entries {
        for s in e.free_symbols() {
            let known = COORDS.contains(&s.as_str()) || out.params.contains_key(&s) || symbols.contains(&s.as_str());
            if !known {
                return Err(err(lines_of[key], format!("`{key}` uses undeclared symbol `{s}`")));
            }
        }
    }
    Ok(out)
}

const METRIC_KEYS: [&str; 9] = [
    "g_rr", "g_thth", "g_ss", "g_rth", "g_rs", "g_ths", "g_thr", "g_sr", "g_sth",
];

fn metric_slot(key: &str) -> (usize, usize) {
    let idx = |s: &str| match s {
        "r" => 0,
        "th" => 1,
        _ => 2,
    };
    let body = &key[2..];
    let split = if body.starts_with("th") { 2 } else { 1 };
    (idx(&body[..split]), idx(&body[split..]))
}

/// Metric definition file: `coord`, `param` and `g_xy` lines.
pub fn parse_metric_file(name: &str, text: &str) -> Result<Metric, GeometryError> {
    let def = parse_definition_file(text, &METRIC_KEYS, &[])?;
    for key in ["g_rr", "g_thth", "g_ss"] {
        if !def.entries.contains_key(key) {
            return Err(err(0, format!("missing diagonal entry `{key}`")));
        }
    }
    let mut m = Metric::diagonal(
        name,
        [
            def.entries["g_rr"].clone(),
            def.entries["g_thth"].clone(),
            def.entries["g_ss"].clone(),
        ],
    );
    let mut seen = BTreeMap::new();
    for (key, e) in &def.entries {
        let (i, j) = metric_slot(key);
        if i == j {
            continue;
        }
        let slot = (i.min(j), i.max(j));
        if let Some(prev) = seen.insert(slot, key.clone()) {
            if &def.entries[&prev] != e {
                return Err(err(0, format!("`{prev}` and `{key}` disagree")));
            }
        }
        m.set(i, j, e.clone());
    }
    m.params = def.params;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    const RICCA: &str = "\
# Ricca tube at fixed torsion
coord = r, theta_R, s
param kappa = 0.1
param tau0 = 0.2
g_rr = 1
g_thth = r^2
g_ss = (1 - kappa*r*cos(theta_R - tau0*s))^2   # axial stretch
";

    #[test]
    fn ricca_file() {
        let m = parse_metric_file("ricca", RICCA).unwrap();
        assert!(m.is_diagonal());
        assert_eq!(m.params["kappa"], 0.1);
        let g = m.evaluate_at(&[1.0, 0.0, 0.0]).unwrap();
        assert!((g[2][2] - 0.81f64).abs() < 1e-12);
    }

    #[test]
    fn off_diagonal_defaults_and_symmetry() {
        let m = parse_metric_file("m", "g_rr = 1\ng_thth = r^2\ng_ss = 1\ng_ths = r/4\n").unwrap();
        assert_eq!(m.g(2, 1), m.g(1, 2));
        assert!(m.g(0, 1).is_zero());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_metric_file("m", "g_rr = 1\ng_thth = r^\n").unwrap_err();
        assert!(matches!(e, GeometryError::Parse { line: 2, .. }));
        let e = parse_metric_file("m", "g_rr = 1\ng_thth = r^2\ng_ss = lambda\n").unwrap_err();
        assert!(matches!(e, GeometryError::File { line: 3, .. }));
        let e = parse_metric_file("m", "coord = x, y, z\n").unwrap_err();
        assert!(matches!(e, GeometryError::File { line: 1, .. }));
        let e = parse_metric_file("m", "g_rr = 1\n").unwrap_err();
        assert!(e.to_string().contains("g_thth"));
        let e = parse_metric_file("m", "g_rr = 1\ng_rr = 2\n").unwrap_err();
        assert!(e.to_string().contains("duplicate"));
    }
}
