//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "kbmrac",
    version,
    about = "Adaptive velocity control with a Kalman-Bucy observer in the loop: \
             scenario runner, comparisons and stability diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and write its log, metrics and config echo.
    Run(RunArgs),
    /// Run two scenarios with the same seed and report paired metrics.
    Compare(CompareArgs),
    /// Re-run the stability diagnostics over a previously written log.
    Diagnose(DiagnoseArgs),
    /// Write the built-in scenario files.
    Presets(PresetsArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Built-in scenario name (see `presets`).
    #[arg(long, conflicts_with = "config")]
    pub preset: Option<String>,
    /// Scenario file (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the scenario seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for the artifacts.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Disable process and measurement noise injection.
    #[arg(long)]
    pub no_noise: bool,
    /// Print the stability verdicts after the run.
    #[arg(long)]
    pub diagnose: bool,
    /// Override the simulated duration (s).
    #[arg(long)]
    pub duration: Option<f64>,
    /// Override the integration step (s).
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Compare the built-in unblended/blended noise-drift pair.
    #[arg(long, conflicts_with = "configs")]
    pub sim1: bool,
    /// Two scenario files to compare.
    #[arg(num_args = 2, value_names = ["CONFIG_A", "CONFIG_B"])]
    pub configs: Vec<PathBuf>,
    /// Seed applied to both runs (defaults to the first scenario's seed).
    #[arg(long)]
    pub seed: Option<u64>,
    /// When given, write both runs' artifacts plus the comparison summary.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Disable noise injection in both runs.
    #[arg(long)]
    pub no_noise: bool,
    /// Override the simulated duration of both runs (s).
    #[arg(long)]
    pub duration: Option<f64>,
    /// Override the integration step of both runs (s).
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    /// Log file produced by `run` (`<name>_log.csv`).
    pub log: PathBuf,
    /// Config echo the log was produced with; defaults to the sibling
    /// `<name>_config.toml`.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PresetsArgs {
    /// Output directory for the scenario files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}
