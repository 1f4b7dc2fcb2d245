//! Experiment driver for `heisenberg-qc`: configuration, subcommands and
//! deterministic report files.

use std::path::{Path, PathBuf};

pub mod commands;
pub mod config;
pub mod output;
pub mod specs;

use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use output::Output;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Module(#[from] heisenberg_qc::Error),
    #[error("{}: {1}", .0.display())]
    Io(PathBuf, std::io::Error),
    #[error("invariant check failed")]
    Invariant,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use heisenberg_qc::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Module(E::Config(_) | E::NonPositiveDilation(_) | E::TruncationParameter(_) | E::BudgetInfeasible { .. }) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hqc", version, about = "Contact flows and quasiconformal maps on the Heisenberg group")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON run configuration; defaults are used for missing fields.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "hqc-out")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the invariant suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Only run checks of this module tag or name (e.g. `group`, `flow.round_trip`).
        #[arg(long, value_name = "NAME")]
        filter: Option<String>,
    },
    /// Integrate a contact flow and dump its trajectory.
    Flow(Common),
    /// Measure admissibility, logarithmic potential and strain report.
    Potential(Common),
    /// Build the potential for a map and a density.
    Construct(Common),
    /// Run the iteration and report Jacobian comparability.
    Iterate(Common),
    /// Distance comparability suite.
    Metric(Common),
    /// Print the effective configuration.
    Config(Common),
}

pub fn load_config(common: &Common) -> Result<RunConfig, CliError> {
    let cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    cfg.finalize(common.seed)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let (name, common) = match &cli.command {
        Command::Verify { common, .. } => ("verify", common),
        Command::Flow(c) => ("flow", c),
        Command::Potential(c) => ("potential", c),
        Command::Construct(c) => ("construct", c),
        Command::Iterate(c) => ("iterate", c),
        Command::Metric(c) => ("metric", c),
        Command::Config(c) => ("config", c),
    };
    let cfg = load_config(common)?;
    if let Command::Config(_) = cli.command {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
        return Ok(());
    }
    let mut out = Output::new(Path::new(&common.out), name, &cfg)?;
    match &cli.command {
        Command::Verify { filter, .. } => {
            if !commands::verify::run(&cfg, filter.as_deref(), &mut out)? {
                return Err(CliError::Invariant);
            }
        }
        Command::Flow(_) => commands::flow::run(&cfg, &mut out)?,
        Command::Potential(_) => commands::potential::run(&cfg, &mut out)?,
        Command::Construct(_) => {
            commands::construct::run(&cfg, &mut out)?;
        }
        Command::Iterate(_) => {
            commands::iterate::run(&cfg, &mut out)?;
        }
        Command::Metric(_) => {
            commands::metric::run(&cfg, &mut out)?;
        }
        Command::Config(_) => unreachable!(),
    }
    for p in &out.written {
        println!("{}", p.display());
    }
    Ok(())
}
