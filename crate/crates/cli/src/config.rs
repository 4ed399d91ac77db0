use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use dynlab_core::grid::SampleGrid;
use serde::Serialize;

use crate::args::{CommonArgs, Format};

/// Smallest admissible radius; `r = 0` is a coordinate singularity.
pub const MIN_RADIUS: f64 = 0.1;

/// Everything that determines a report. The output path is deliberately
/// left out so that the same run written to two places is byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_file: Option<PathBuf>,
    pub params: BTreeMap<String, f64>,
    pub grid: SampleGrid,
    pub seed: u64,
    pub format: Format,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<String, serde_json::Value>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: &str, common: &CommonArgs) -> Result<RunConfig> {
        let params = parse_params(&common.params)?;
        let grid = match &common.grid {
            Some(spec) => parse_grid(spec)?,
            None => SampleGrid::default(),
        };
        Ok(RunConfig {
            command: command.to_string(),
            metric: None,
            metric_file: None,
            field_file: None,
            params,
            grid,
            seed: common.seed,
            format: common.format,
            options: BTreeMap::new(),
            out: common.out.clone(),
        })
    }

    pub fn option(mut self, key: &str, value: impl Serialize) -> RunConfig {
        let v = serde_json::to_value(value).expect("plain data serializes");
        self.options.insert(key.to_string(), v);
        self
    }
}

pub fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in raw {
        let (name, value) = item
            .split_once('=')
            .with_context(|| format!("--param `{item}`: expected NAME=VALUE"))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            bail!("--param `{item}`: invalid parameter name");
        }
        let v: f64 = value
            .trim()
            .parse()
            .with_context(|| format!("--param `{item}`: `{value}` is not a number"))?;
        if !v.is_finite() {
            bail!("--param `{item}`: value must be finite");
        }
        if out.insert(name.to_string(), v).is_some() {
            bail!("--param `{name}` given twice");
        }
    }
    Ok(out)
}

/// `a:b:n` with `n >= 1`.
pub fn parse_range(spec: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts[..] else {
        bail!("range `{spec}`: expected a:b:n");
    };
    let num = |t: &str| -> Result<f64> {
        let v: f64 = t
            .trim()
            .parse()
            .with_context(|| format!("range `{spec}`: `{t}` is not a number"))?;
        if !v.is_finite() {
            bail!("range `{spec}`: bounds must be finite");
        }
        Ok(v)
    };
    let n: usize = n
        .trim()
        .parse()
        .with_context(|| format!("range `{spec}`: `{n}` is not a count"))?;
    if n == 0 {
        bail!("range `{spec}`: count must be at least 1");
    }
    Ok((num(a)?, num(b)?, n))
}

/// `r=a:b:n,theta=a:b:n,s=a:b:n`; omitted axes keep their defaults.
pub fn parse_grid(spec: &str) -> Result<SampleGrid> {
    let mut grid = SampleGrid::default();
    let mut seen = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (axis, range) = item
            .split_once('=')
            .with_context(|| format!("--grid `{item}`: expected AXIS=a:b:n"))?;
        let axis = match axis.trim() {
            "r" => "r",
            "theta" | "theta_R" | "th" => "theta",
            "s" => "s",
            other => bail!("--grid: unknown axis `{other}` (use r, theta, s)"),
        };
        if seen.contains(&axis) {
            bail!("--grid: axis `{axis}` given twice");
        }
        seen.push(axis);
        let (a, b, n) = parse_range(range)?;
        let values = SampleGrid::linspace(a, b, n);
        match axis {
            "r" => {
                if a.min(b) < MIN_RADIUS {
                    bail!("--grid: r must stay >= {MIN_RADIUS}");
                }
                grid.r = values;
            }
            "theta" => grid.theta = values,
            _ => grid.s = values,
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse_and_reject() {
        let p = parse_params(&["kappa=0.2".into(), "tau0 = -1e-3".into()]).unwrap();
        assert_eq!(p["kappa"], 0.2);
        assert_eq!(p["tau0"], -1e-3);
        assert!(parse_params(&["kappa".into()]).is_err());
        assert!(parse_params(&["kappa=x".into()]).is_err());
        assert!(parse_params(&["a=1".into(), "a=2".into()]).is_err());
        assert!(parse_params(&["a b=1".into()]).is_err());
    }

    #[test]
    fn grid_overrides_only_named_axes() {
        let g = parse_grid("r=0.5:1.5:3").unwrap();
        assert_eq!(g.r, vec![0.5, 1.0, 1.5]);
        assert_eq!(g.s, SampleGrid::default().s);
        let g = parse_grid("theta_R=0:1:1,s=0:2:2").unwrap();
        assert_eq!((g.theta.clone(), g.s.clone()), (vec![0.0], vec![0.0, 2.0]));
    }

    #[test]
    fn grid_rejects_bad_specs() {
        for bad in ["r=0:1:3", "r=0.5:1:0", "q=0:1:2", "r=1:2", "r=1:2:3,r=1:2:3", "s=a:1:2"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
