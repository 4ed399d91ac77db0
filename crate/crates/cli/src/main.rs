mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn run(cli: Cli) -> anyhow::Result<()> {
    let outcome = match cli.command {
        Command::Curvature(a) => commands::curvature(a)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Growth(a) => commands::growth(a)?,
        Command::Ledger(a) => commands::ledger(a)?,
    };
    output::emit(&outcome)
}

// Discrepant verdicts are report data; only usage, parse and I/O failures
// reach the error path.
fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
