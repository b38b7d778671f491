//! Thin command-line front end over [`hoplan::commands`].
//!
//! Exit codes: 0 success, 1 config/usage error, 2 coverage gap, 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hoplan::scenario::{self, Scenario};
use hoplan::{commands, Result};

#[derive(Parser)]
#[command(
    name = "hoplan",
    version,
    about = "Graph-based handover planning for LEO satellite constellations"
)]
struct Cli {
    /// Scenario file (TOML). Every key has a default; omitting the flag runs
    /// the built-in Starlink-like scenario.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's `output.directory`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Relaxation period override in seconds, comma-separated for sweeps
    /// (e.g. `--lambda 120,150,180,300`).
    #[arg(long, global = true, value_name = "SECONDS", value_delimiter = ',')]
    lambda: Option<Vec<f64>>,

    /// Seed override for synthetic scenario generators.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate (or re-emit) the constellation ephemeris table.
    Constellation,
    /// Solve the handover graph for the first configured lambda.
    Plan,
    /// Run the elevation-threshold baseline.
    Baseline,
    /// Graph plans across all lambdas vs. the threshold baseline.
    Compare,
    /// Closed-form graph-size model across all lambdas.
    Complexity,
}

fn load(cli: &Cli) -> Result<Scenario> {
    let mut s = match &cli.config {
        Some(path) => scenario::load_scenario(path)?,
        None => scenario::scenario_from_str("", Path::new("."))?,
    };
    if let Some(out) = &cli.out {
        s.out_dir = out.clone();
    }
    if let Some(lambdas) = &cli.lambda {
        s.override_lambdas(lambdas.clone())?;
    }
    if let Some(seed) = cli.seed {
        s.seed = seed;
    }
    Ok(s)
}

fn run(cli: &Cli) -> Result<()> {
    let s = load(cli)?;
    match cli.command {
        Command::Constellation => {
            commands::cmd_constellation(&s)?;
        }
        Command::Plan => {
            commands::cmd_plan(&s)?;
        }
        Command::Baseline => {
            commands::cmd_baseline(&s)?;
        }
        Command::Compare => {
            commands::cmd_compare(&s)?;
        }
        Command::Complexity => {
            commands::cmd_complexity(&s)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here and must exit 0; genuine usage
            // mistakes are config errors (exit 1), not clap's default 2.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
