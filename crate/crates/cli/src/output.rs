use std::fs;
use std::io::Write;

use anyhow::{Context, Result};
use dynlab_core::report::ClaimRecord;
use serde_json::Value;

use crate::args::Format;
use crate::commands::Outcome;

/// Flat table for the CSV projection.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().context("flushing CSV")
    }
}

/// Shortest round-trip form, with exponents for tiny and huge values.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

/// One row per sample; the point is flattened to `name=value;...`.
pub fn claims_table(claims: &[ClaimRecord]) -> Table {
    let mut t = Table::new(&[
        "id",
        "verdict",
        "tolerance",
        "sign_convention",
        "component",
        "point",
        "paper_value",
        "computed_value",
        "abs_diff",
    ]);
    for c in claims {
        let sign = match serde_json::to_value(c.sign_convention) {
            Ok(Value::String(s)) => s,
            _ => String::new(),
        };
        for s in &c.samples {
            let point = s
                .point
                .iter()
                .map(|(k, v)| format!("{k}={}", num(*v)))
                .collect::<Vec<_>>()
                .join(";");
            t.push(vec![
                c.id.clone(),
                c.verdict.as_str().to_string(),
                num(c.tolerance),
                sign.clone(),
                s.component.clone().unwrap_or_default(),
                point,
                num(s.paper_value),
                num(s.computed_value),
                num(s.abs_diff),
            ]);
        }
    }
    t
}

pub fn render(outcome: &Outcome) -> Result<Vec<u8>> {
    match outcome.config.format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(&outcome.json)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => outcome.table.to_csv(),
    }
}

pub fn emit(outcome: &Outcome) -> Result<()> {
    let bytes = render(outcome)?;
    match &outcome.config.out {
        Some(path) => fs::write(path, &bytes).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(&bytes).and_then(|_| out.flush()) {
                // A closed downstream pipe (e.g. `| head`) is not a failure.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.context("cannot write to stdout"),
            }
        }
    }
}
