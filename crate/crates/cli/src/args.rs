use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dynlab",
    version,
    about = "Curvature, induction and growth-rate checks for conformal flux tubes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Riemann components of a metric over a sample grid.
    Curvature(CurvatureArgs),
    /// Residual checks for theorems 1 and 2, or the marginal mode solve (3).
    Verify(VerifyArgs),
    /// Growth rate from the closed-form curvature formula or a Floquet ratio.
    Growth(GrowthArgs),
    /// Every registered claim in one report.
    Ledger(LedgerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Parameter override, e.g. `kappa=0.2`. Repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Grid axes, e.g. `r=0.1:2:5,theta=0:3.14:4,s=0:1:2`.
    #[arg(long, value_name = "SPEC")]
    pub grid: Option<String>,
    /// Seed for random sample points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    /// Catalog metric name.
    #[arg(long, conflicts_with = "metric_file", required_unless_present = "metric_file")]
    pub metric: Option<String>,
    /// Metric definition file.
    #[arg(long, value_name = "PATH")]
    pub metric_file: Option<PathBuf>,
    /// Add verdicts for the printed curvature claims about this metric.
    #[arg(long)]
    pub compare_paper: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub theorem: u8,
    /// Field definition file replacing the built-in fixture (theorems 1, 2).
    #[arg(long, value_name = "PATH")]
    pub field_file: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    /// Resistivity.
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Gaussian curvature.
    #[arg(
        long,
        allow_negative_numbers = true,
        requires = "eta",
        conflicts_with = "kappa_sweep"
    )]
    pub kappa_gauss: Option<f64>,
    /// Sweep the Gaussian curvature over `a:b:n` at the given eta.
    #[arg(long, value_name = "A:B:N", requires = "eta", allow_hyphen_values = true)]
    pub kappa_sweep: Option<String>,
    /// Amplitudes at the start and end of one period, and the period.
    #[arg(long, num_args = 3, value_names = ["B0", "B1", "T"], allow_negative_numbers = true, conflicts_with = "eta")]
    pub floquet: Option<Vec<f64>>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct LedgerArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}
