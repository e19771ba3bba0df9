//! Command-line front end for the estimation experiments.
//!
//! Three subcommands: `list` prints the registry, `run` executes one
//! experiment and writes its record/summary files, and `verify` runs the
//! invariant suite.  Exit codes follow the interface contract: 0 on
//! success, 2 for configuration problems, 3 when `verify` finds a
//! violated bound, and 1 for internal failures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rho_cli::config::{CliOverrides, ConfigError, FileConfig, RunSettings};
use rho_cli::experiments::{self, HarnessError};
use rho_cli::{runner, verify};

#[derive(Parser)]
#[command(
    name = "rho",
    version,
    about = "Robust density and regression estimation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered experiments with a one-line description.
    List,
    /// Run one experiment and write records.csv and summary.json.
    Run {
        /// Registry name of the experiment (see `rho list`).
        experiment: String,
        /// JSON config file; the flags below override its fields.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Monte Carlo repetitions.
        #[arg(long)]
        reps: Option<usize>,
        /// Base seed; repetition r draws from stream r of this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0 = pool default); records are identical for any value.
        #[arg(long)]
        threads: Option<usize>,
        /// Output root; files land in <out>/<experiment>/.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite; exits 0 only if every check passes.
    Verify,
}

enum RunError {
    Config(ConfigError),
    Harness(HarnessError),
}

impl From<ConfigError> for RunError {
    fn from(err: ConfigError) -> Self {
        RunError::Config(err)
    }
}

impl From<HarnessError> for RunError {
    fn from(err: HarnessError) -> Self {
        RunError::Harness(err)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            for exp in experiments::registry() {
                println!("{:32} {}", exp.name(), exp.describe());
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            experiment,
            config,
            reps,
            seed,
            threads,
            out,
        } => {
            let cli = CliOverrides {
                reps,
                seed,
                threads,
                out_dir: out,
            };
            match try_run(&experiment, config.as_deref(), cli) {
                Ok(()) => ExitCode::SUCCESS,
                Err(RunError::Config(err)) => {
                    eprintln!("error: {err}");
                    ExitCode::from(2)
                }
                Err(RunError::Harness(err)) => {
                    eprintln!("error: {err}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Verify => {
            if verify::run_all() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn try_run(name: &str, config: Option<&Path>, cli: CliOverrides) -> Result<(), RunError> {
    let exp = experiments::find(name)?;
    let file = FileConfig::load(config)?;
    if let Some(named) = &file.experiment {
        if named != exp.name() {
            return Err(ConfigError::Invalid(format!(
                "config file is for experiment `{named}` but the command line asked for `{}`",
                exp.name()
            ))
            .into());
        }
    }
    let settings = RunSettings::resolve(exp.name(), &file, &cli, exp.defaults())?;
    experiments::validate(exp, &settings)?;
    let outcome = runner::execute(exp, &settings)?;
    runner::write_outputs(&settings, &outcome)?;
    println!(
        "{}: {} records -> {}",
        settings.experiment,
        outcome.records.len(),
        settings.experiment_dir().display()
    );
    if let Some(groups) = outcome.summary.get("groups").and_then(|g| g.as_array()) {
        for group in groups {
            let estimator = group.get("estimator").and_then(|v| v.as_str()).unwrap_or("?");
            let position = group.get("group").and_then(|v| v.as_str()).unwrap_or("");
            let label = if position.is_empty() {
                estimator.to_string()
            } else {
                format!("{estimator} @ {position}")
            };
            let mean = group
                .pointer("/h2/mean")
                .or_else(|| group.pointer("/sq/mean"))
                .and_then(|v| v.as_f64())
                .map(|m| format!("{m:.6}"))
                .unwrap_or_else(|| "n/a".into());
            println!("  {label}: mean risk {mean}");
        }
    }
    Ok(())
}
