use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use dynlab_core::geometry::{
    metric_catalog, parse_metric_file, riemann, Metric, RiemannTensor, COORDS, INDEPENDENT_PAIRS,
};
use dynlab_core::induction::{
    check_theorem1, check_theorem2, parse_field_file, theorem1_fixture, theorem2_fixture, ResidualReport, TubeFieldSet,
};
use dynlab_core::ledger::{curvature_claims, run_ledger, LedgerConfig};
use dynlab_core::modes::{
    chicone_latushkin_gamma, classify_complex, floquet_growth, marginal_mode_solve, GrowthResult, ModeParams,
    NamedValue,
};
use dynlab_core::report::{ClaimRecord, ComparisonReport};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{CurvatureArgs, GrowthArgs, LedgerArgs, VerifyArgs};
use crate::config::{parse_range, RunConfig};
use crate::output::{claims_table, num, Table};

/// A finished command: the JSON document and its flat CSV projection.
pub struct Outcome {
    pub config: RunConfig,
    pub json: Value,
    pub table: Table,
}

fn document(cfg: &RunConfig, claims: &[ClaimRecord], extra: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    m.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("config".into(), to_value(cfg));
    m.insert("claims".into(), to_value(claims));
    for (k, v) in extra {
        m.insert(k.into(), v);
    }
    Value::Object(m)
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report data serializes")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn point_map(p: &[f64; 3]) -> BTreeMap<&'static str, f64> {
    COORDS.iter().copied().zip(p.iter().copied()).collect()
}

fn ledger_config(cfg: &RunConfig) -> LedgerConfig {
    LedgerConfig {
        seed: cfg.seed,
        grid: cfg.grid.clone(),
        params: cfg.params.clone(),
        ..LedgerConfig::default()
    }
}

#[derive(Serialize)]
struct ComponentValue {
    point: BTreeMap<&'static str, f64>,
    component: String,
    value: f64,
}

pub fn curvature(args: CurvatureArgs) -> Result<Outcome> {
    let mut cfg = RunConfig::new("curvature", &args.common)?.option("compare_paper", args.compare_paper);
    let mut metric: Metric = match (&args.metric, &args.metric_file) {
        (Some(name), _) => {
            cfg.metric = Some(name.clone());
            metric_catalog(name)?
        }
        (None, Some(path)) => {
            cfg.metric_file = Some(path.clone());
            let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("metric-file");
            parse_metric_file(name, &read(path)?).with_context(|| format!("in {}", path.display()))?
        }
        (None, None) => bail!("one of --metric or --metric-file is required"),
    };
    metric.override_params(&cfg.params)?;

    let points = cfg.grid.points();
    let mut notes: Vec<String> = metric.notes.clone();
    if let Err(e) = metric.check_positive_definite(&points) {
        notes.push(format!("warning: {e}"));
    }
    let tensor = riemann(&metric)?;
    let mut table = Vec::with_capacity(points.len() * INDEPENDENT_PAIRS.len());
    for p in &points {
        for ijkl in INDEPENDENT_PAIRS {
            let value = tensor.evaluate(ijkl, p).unwrap_or(f64::NAN);
            table.push(ComponentValue {
                point: point_map(p),
                component: RiemannTensor::label(ijkl),
                value,
            });
        }
    }
    let symbolic: BTreeMap<String, String> = INDEPENDENT_PAIRS
        .iter()
        .map(|&ijkl| {
            (
                RiemannTensor::label(ijkl),
                tensor.get(ijkl[0], ijkl[1], ijkl[2], ijkl[3]).to_string(),
            )
        })
        .collect();

    let claims = match (&args.metric, args.compare_paper) {
        (Some(name), true) => {
            let c = curvature_claims(name, &ledger_config(&cfg)).claims;
            if c.is_empty() {
                notes.push(format!("no printed curvature claims are registered for {name}"));
            }
            c
        }
        (None, true) => {
            notes.push("claims are registered for catalog metrics only".into());
            Vec::new()
        }
        _ => Vec::new(),
    };

    let csv = if args.compare_paper {
        claims_table(&claims)
    } else {
        let mut t = Table::new(&["r", "theta_R", "s", "component", "value"]);
        for row in &table {
            let mut cells: Vec<String> = COORDS.iter().map(|c| num(row.point[c])).collect();
            cells.push(row.component.clone());
            cells.push(num(row.value));
            t.push(cells);
        }
        t
    };
    let json = document(
        &cfg,
        &claims,
        vec![
            ("metric", json!(metric.to_string())),
            ("components", to_value(&symbolic)),
            ("tensor", to_value(&table)),
            ("notes", to_value(&notes)),
        ],
    );
    Ok(Outcome {
        config: cfg,
        json,
        table: csv,
    })
}

fn mode_params(params: &BTreeMap<String, f64>) -> Result<ModeParams> {
    let mut p = ModeParams::default();
    for (name, &v) in params {
        match name.as_str() {
            "omega0" => p.omega0 = v,
            "tau0" => p.tau0 = v,
            "r" => p.r = v,
            "theta" | "theta_R" => p.theta = v,
            "B0_theta" => p.b0_theta = v,
            "B0_s" => p.b0_s = v,
            "gamma" => p.gamma = Some(v),
            "Omega0" => {
                p.params.insert(name.clone(), v);
            }
            other => bail!(
                "unknown parameter `{other}` for theorem 3 \
                 (known: omega0, tau0, r, theta, B0_theta, B0_s, gamma, Omega0)"
            ),
        }
    }
    Ok(p)
}

fn residual_table(r: &ResidualReport) -> Table {
    let mut t = Table::new(&["residual", "r", "theta_R", "s", "value"]);
    for e in &r.residuals {
        for pv in &e.values {
            let mut cells = vec![e.name.clone()];
            cells.extend(pv.point.iter().copied().map(num));
            cells.push(pv.value.map_or_else(|| "NaN".to_string(), num));
            t.push(cells);
        }
    }
    t
}

fn growth_table(g: &GrowthResult) -> Table {
    let mut t = Table::new(&["quantity", "value"]);
    t.push(vec!["gamma".into(), num(g.gamma)]);
    t.push(vec!["gamma_im".into(), num(g.gamma_im)]);
    t.push(vec!["classification".into(), g.classification.as_str().into()]);
    for r in &g.residuals {
        t.push(vec![r.name.clone(), num(r.value)]);
    }
    t
}

pub fn verify(args: VerifyArgs) -> Result<Outcome> {
    let mut cfg = RunConfig::new("verify", &args.common)?.option("theorem", args.theorem);
    cfg.field_file = args.field_file.clone();
    if args.theorem == 3 {
        if args.field_file.is_some() {
            bail!("--field-file does not apply to theorem 3");
        }
        let p = mode_params(&cfg.params)?;
        let g = marginal_mode_solve(&p, true)?;
        let table = growth_table(&g);
        let json = document(&cfg, &[], vec![("mode_params", to_value(&p)), ("growth", to_value(&g))]);
        return Ok(Outcome {
            config: cfg,
            json,
            table,
        });
    }
    let mut fields: TubeFieldSet = match &args.field_file {
        Some(path) => parse_field_file(&read(path)?).with_context(|| format!("in {}", path.display()))?,
        None if args.theorem == 1 => theorem1_fixture(),
        None => theorem2_fixture(),
    };
    for (k, &v) in &cfg.params {
        fields = fields.with_param(k, v);
    }
    let report = match args.theorem {
        1 => check_theorem1(&fields, &cfg.grid)?,
        _ => check_theorem2(&fields, &cfg.grid)?,
    };
    let table = residual_table(&report);
    let json = document(
        &cfg,
        &[],
        vec![("fields", to_value(&fields)), ("residual_report", to_value(&report))],
    );
    Ok(Outcome {
        config: cfg,
        json,
        table,
    })
}

#[derive(Serialize)]
struct SweepPoint {
    kappa_gauss: f64,
    gamma: f64,
    gamma_im: f64,
    classification: &'static str,
}

fn floquet_result(b0: f64, b1: f64, period: f64) -> Result<GrowthResult> {
    let gamma = floquet_growth(b0, b1, period)?;
    Ok(GrowthResult {
        gamma,
        gamma_im: 0.0,
        classification: classify_complex(Complex64::new(gamma, 0.0)),
        residuals: vec![NamedValue::new("amplitude_ratio", b1 / b0)],
        provenance: format!("ln(B1/B0)/T with B0 = {b0}, B1 = {b1}, T = {period}"),
        notes: Vec::new(),
        weak_torsion: None,
    })
}

pub fn growth(args: GrowthArgs) -> Result<Outcome> {
    let cfg = RunConfig::new("growth", &args.common)?;
    if let Some(f) = &args.floquet {
        let [b0, b1, period] = f[..] else {
            bail!("--floquet takes exactly three numbers");
        };
        let cfg = cfg.option("floquet", [b0, b1, period]);
        let g = floquet_result(b0, b1, period)?;
        let json = document(&cfg, &[], vec![("growth", to_value(&g))]);
        return Ok(Outcome {
            table: growth_table(&g),
            config: cfg,
            json,
        });
    }
    let Some(eta) = args.eta else {
        bail!("growth needs --eta with --kappa-gauss or --kappa-sweep, or --floquet B0 B1 T");
    };
    let cfg = cfg.option("eta", eta);
    if let Some(spec) = &args.kappa_sweep {
        let (a, b, n) = parse_range(spec).context("--kappa-sweep")?;
        let cfg = cfg.option("kappa_sweep", spec);
        let series: Vec<SweepPoint> = dynlab_core::grid::SampleGrid::linspace(a, b, n)
            .into_iter()
            .map(|k| {
                let g = chicone_latushkin_gamma(eta, k);
                SweepPoint {
                    kappa_gauss: k,
                    gamma: g.gamma,
                    gamma_im: g.gamma_im,
                    classification: g.classification.as_str(),
                }
            })
            .collect();
        let mut table = Table::new(&["kappa_gauss", "gamma", "gamma_im", "classification"]);
        for s in &series {
            table.push(vec![
                num(s.kappa_gauss),
                num(s.gamma),
                num(s.gamma_im),
                s.classification.to_string(),
            ]);
        }
        let json = document(&cfg, &[], vec![("series", to_value(&series))]);
        return Ok(Outcome {
            config: cfg,
            json,
            table,
        });
    }
    let Some(k) = args.kappa_gauss else {
        bail!("--eta needs --kappa-gauss or --kappa-sweep");
    };
    let cfg = cfg.option("kappa_gauss", k);
    let g = chicone_latushkin_gamma(eta, k);
    let json = document(&cfg, &[], vec![("growth", to_value(&g))]);
    Ok(Outcome {
        table: growth_table(&g),
        config: cfg,
        json,
    })
}

pub fn ledger(args: LedgerArgs) -> Result<Outcome> {
    let cfg = RunConfig::new("ledger", &args.common)?;
    let report: ComparisonReport = run_ledger(&ledger_config(&cfg));
    let json = document(&cfg, &report.claims, Vec::new());
    Ok(Outcome {
        table: claims_table(&report.claims),
        config: cfg,
        json,
    })
}
