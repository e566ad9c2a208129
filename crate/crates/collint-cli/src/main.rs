// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! `collint`: run collision-model scenarios from JSON configs.

mod config;
mod error;
mod output;
mod runner;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::CliError;
use crate::output::{pretty, Format};
use crate::runner::{RunOptions, RunOutcome};

#[derive(Debug, Parser)]
#[command(
    name = "collint",
    version,
    about = "Continuous-time interpolation of collision models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario and write its outputs.
    Run {
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "collint-out")]
        out: PathBuf,
        /// Format of tabular outputs.
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Series orders, either `0..K` (inclusive) or a comma-separated list.
        #[arg(long, value_parser = parse_orders)]
        orders: Option<OrderList>,
        /// Tolerance for CP and Lindblad decisions.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Parse and validate a config without running it.
    Validate { config: PathBuf },
    /// List the available scenarios.
    ListScenarios,
}

/// Parsed `--orders` value.
#[derive(Debug, Clone)]
struct OrderList(Vec<usize>);

fn parse_orders(s: &str) -> Result<OrderList, String> {
    let bad = |_| format!("invalid orders `{s}`: expected `0..K` or `k1,k2,...`");
    let orders: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(bad)?;
        let hi: usize = hi.trim().parse().map_err(bad)?;
        (lo..=hi).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse().map_err(bad))
            .collect::<Result<_, _>>()?
    };
    if orders.is_empty() {
        return Err(format!("invalid orders `{s}`: empty range"));
    }
    Ok(OrderList(orders))
}

/// Size the global rayon pool from `COLLINT_THREADS`, if set.
fn init_thread_pool() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("COLLINT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("COLLINT_THREADS must be a positive integer, got `{raw}`")))?;
    if threads == 0 {
        return Err(CliError::Validation("COLLINT_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Validation(format!("cannot build thread pool: {e}")))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn write_outcome(out: &Path, format: Format, outcome: &RunOutcome) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Io {
        path: out.display().to_string(),
        source: e,
    })?;
    for (kind, table) in &outcome.tables {
        let name = format!("{}.{}", kind.name(), format.extension());
        write_file(&out.join(name), &table.render(format))?;
    }
    for (kind, doc) in &outcome.documents {
        write_file(&out.join(format!("{}.json", kind.name())), &pretty(doc))?;
    }
    write_file(&out.join("report.json"), &pretty(&outcome.report))
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::ListScenarios => {
            for (name, description) in config::SCENARIOS {
                println!("{name:<22} {description}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => {
            let v = config::parse_config(&config)?;
            println!("{}: valid {} config", config.display(), v.config.scenario);
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            config,
            out,
            format,
            orders,
            tol,
        } => {
            if !(tol > 0.0) {
                return Err(CliError::Validation("--tol must be positive".into()));
            }
            init_thread_pool()?;
            let v = config::parse_config(&config)?;
            let outcome = runner::run(
                &v,
                &RunOptions {
                    tol,
                    orders: orders.map(|o| o.0),
                },
            )?;
            write_outcome(&out, format, &outcome)?;
            match outcome.divergence {
                Some(dt) => {
                    eprintln!("error: principal logarithm fails for dt >= {dt:.12e}");
                    Ok(ExitCode::from(2))
                }
                None => Ok(ExitCode::SUCCESS),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
