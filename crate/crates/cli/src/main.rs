//! `meridian`: build meridian surfaces from JSON configs, verify their defining
//! properties, and check natural-system residuals.
//!
//! Exit codes: 0 pass, 1 property failure, 2 config error, 3 numeric or domain failure.

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Overrides;
use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, CliResult, EXIT_PASS, EXIT_PROPERTY};

const THREADS_VAR: &str = "MERIDIAN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "meridian", version, about = "Timelike meridian surfaces in Minkowski 4-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `out` in the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance; overrides `tol` in the config.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the surface and write surface.csv (and surface.json / surface.obj).
    Generate,
    /// Check the family's defining property on the grid.
    Verify,
    /// Write the isotropic-frame geometric functions on the grid.
    Geomfuncs,
    /// Residuals of a natural-system solution.
    Pde,
    /// Write one mesh or table file, OBJ by default.
    Export,
    /// Run the built-in invariant suite and print the table.
    Selfcheck,
}

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| CliError::config(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(format!("cannot size the thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<bool> {
    init_threads()?;
    let ov = Overrides { out: cli.out, tol: cli.tol, format: cli.format };
    if let Command::Selfcheck = cli.command {
        return commands::selfcheck();
    }
    let path = cli.config.ok_or_else(|| CliError::config("--config <path> is required"))?;
    let cfg = RunConfig::load(&path)?;
    match cli.command {
        Command::Generate => commands::generate(&cfg, &ov),
        Command::Verify => commands::verify(&cfg, &ov),
        Command::Geomfuncs => commands::geomfuncs(&cfg, &ov),
        Command::Pde => commands::pde(&cfg, &ov),
        Command::Export => commands::export(&cfg, &ov),
        Command::Selfcheck => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(EXIT_PASS),
        Ok(false) => ExitCode::from(EXIT_PROPERTY),
        Err(e) => {
            eprintln!("meridian: {e}");
            e.exit_code()
        }
    }
}
