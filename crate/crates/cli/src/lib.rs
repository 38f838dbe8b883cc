//! Command-line front end for the locman cost models.
//!
//! Every subcommand loads a scenario (defaults when `--scenario` is absent),
//! applies flag overrides and writes CSV to `--out` or stdout.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use locman::report::{self, SweepParam, Table};
use locman::scenario::AlgorithmChoice;
use locman::{LmError, PagingReading, Scenario};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "locman", version, about = "Location-management signaling cost models")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Scenario file (key = value); defaults apply when omitted.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Directory for CSV output; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides simulate.seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// simple | advanced | both
    #[arg(long, global = true)]
    pub algorithm: Option<AlgorithmChoice>,
    /// literal | principled
    #[arg(long, global = true)]
    pub reading: Option<PagingReading>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Boundary tallies and beta probabilities.
    Betas,
    /// Classical vs statistics-based cost rows.
    Costs,
    /// Savings against list size for a swept parameter.
    Sweep {
        /// F | rate_ratio | p_inside | rc | calls_per_list_update
        #[arg(long)]
        param: SweepParam,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Start from the fixed-network template instead of the radio one.
        #[arg(long)]
        fixed_network: bool,
    },
    /// Data series for one of the model figures.
    Figure { id: u32 },
    /// Monte-Carlo checks of the analytic models.
    Simulate {
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Print the effective scenario as a scenario file.
    DumpDefaults,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(LmError),
    #[error("{0}")]
    Runtime(LmError),
    #[error("{path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) | CliError::Output { .. } => 1,
        }
    }
}

fn classify(e: LmError) -> CliError {
    match e {
        LmError::InvalidDimension(_)
        | LmError::Partition { .. }
        | LmError::Coverage(_)
        | LmError::InvalidProbability(_)
        | LmError::Parse { .. }
        | LmError::UnknownKey(_)
        | LmError::Io { .. }
        | LmError::UnknownFigure(_) => CliError::Config(e),
        _ => CliError::Runtime(e),
    }
}

/// Loads, overrides and validates the scenario. Every failure here is a config error.
pub fn load_scenario(opts: &GlobalOpts) -> Result<Scenario, CliError> {
    let mut s = match &opts.scenario {
        Some(path) => Scenario::from_file(path).map_err(CliError::Config)?,
        None => Scenario::default(),
    };
    if let Some(seed) = opts.seed {
        s.seed = seed;
    }
    if let Some(a) = opts.algorithm {
        s.algorithm = a;
    }
    if let Some(r) = opts.reading {
        s.reading = r;
    }
    s.validate().map_err(CliError::Config)?;
    s.layout().map_err(CliError::Config)?;
    Ok(s)
}

fn emit(out: Option<&Path>, name: &str, text: &str) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            let io = |path: &Path| {
                let path = path.display().to_string();
                move |source| CliError::Output { path, source }
            };
            std::fs::create_dir_all(dir).map_err(io(dir))?;
            let file = dir.join(name);
            std::fs::write(&file, text).map_err(io(&file))
        }
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Output {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn emit_table(out: Option<&Path>, name: &str, t: &Table) -> Result<(), CliError> {
    emit(out, name, &t.to_csv())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let s = load_scenario(&cli.global)?;
    let out = cli.global.out.as_deref();
    match &cli.command {
        Command::Betas => {
            let t = report::tally_report(&s, &s.algorithm.algorithms()).map_err(classify)?;
            emit_table(out, "betas.csv", &t)
        }
        Command::Costs => {
            let t = report::cost_report(&s, s.reading).map_err(classify)?;
            emit_table(out, "costs.csv", &t)
        }
        Command::Sweep {
            param,
            values,
            fixed_network,
        } => {
            let t = report::sweep_report(&s, *param, values, *fixed_network).map_err(classify)?;
            if out.is_some() {
                emit_table(out, "sweep.csv", &t.points)?;
                emit_table(out, "sweep_optima.csv", &t.optima)
            } else {
                emit_table(None, "", &t.points)?;
                emit(None, "", "\n")?;
                emit_table(None, "", &t.optima)
            }
        }
        Command::Figure { id } => {
            let t = report::figure_data(*id, &s).map_err(classify)?;
            emit_table(out, &format!("figure{id}.csv"), &t)
        }
        Command::Simulate { steps, trials } => {
            let steps = steps.unwrap_or(s.walk_steps);
            let trials = trials.unwrap_or(s.paging_trials);
            let t = report::validation_report(&s, steps, trials, s.seed).map_err(classify)?;
            emit_table(out, "simulate.csv", &t)
        }
        Command::DumpDefaults => emit(out, "scenario.txt", &s.dump()),
    }
}
