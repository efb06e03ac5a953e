//! Command implementations and the exit-code contract:
//! 0 success, 1 validation failure, 2 divergence, 3 i/o.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use kbmrac::sim::diagnostics::diagnose;
use kbmrac::sim::run_scenario;
use kbmrac::{presets, ScenarioConfig, SimError, TimeSeriesLog};
use thiserror::Error;

use crate::args::{CompareArgs, DiagnoseArgs, PresetsArgs, RunArgs};
use crate::report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Divergence(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Divergence(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Config(c) => CliError::Validation(c.to_string()),
            SimError::Param(p) => CliError::Validation(p.to_string()),
            diverged @ (SimError::Diverged { .. } | SimError::NonFinite { .. }) => {
                CliError::Divergence(diverged.to_string())
            }
        }
    }
}

fn load_scenario(preset: &Option<String>, config: &Option<PathBuf>) -> Result<ScenarioConfig, CliError> {
    match (preset, config) {
        (Some(name), None) => presets::by_name(name).ok_or_else(|| {
            CliError::Validation(format!(
                "unknown preset `{name}`; available: {}",
                presets::PRESET_NAMES.join(", ")
            ))
        }),
        (None, Some(path)) => read_scenario_file(path),
        _ => Err(CliError::Validation(
            "pass exactly one of --preset <name> or --config <path>".into(),
        )),
    }
}

fn read_scenario_file(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn apply_overrides(
    cfg: &mut ScenarioConfig,
    seed: Option<u64>,
    dt: Option<f64>,
    duration: Option<f64>,
    no_noise: bool,
) {
    if let Some(seed) = seed {
        cfg.sim.seed = seed;
    }
    if let Some(dt) = dt {
        cfg.sim.dt = dt;
    }
    if let Some(duration) = duration {
        cfg.sim.duration = duration;
    }
    if no_noise {
        cfg.sim.process_noise = false;
        cfg.sim.measurement_noise = false;
    }
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let mut cfg = load_scenario(&args.preset, &args.config)?;
    apply_overrides(&mut cfg, args.seed, args.dt, args.duration, args.no_noise);
    let cfg = cfg.resolved().map_err(|e| CliError::Validation(e.to_string()))?;

    let (log, metrics) = run_scenario(&cfg)?;
    let paths = report::write_artifacts(&args.out, &cfg.name, &cfg, &log, &metrics)?;

    report::print_run_summary(&cfg, &log, &metrics);
    println!(
        "  wrote {}, {}, {}",
        paths.log.display(),
        paths.metrics.display(),
        paths.config.display()
    );
    if args.diagnose {
        report::print_diagnostics(&diagnose(&log, &cfg));
    }
    Ok(())
}

pub fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let (mut cfg_a, mut cfg_b) = if args.sim1 {
        (presets::sim1_unblended(), presets::sim1_blended())
    } else if args.configs.len() == 2 {
        (read_scenario_file(&args.configs[0])?, read_scenario_file(&args.configs[1])?)
    } else {
        return Err(CliError::Validation(
            "pass --sim1 or exactly two scenario files".into(),
        ));
    };

    apply_overrides(&mut cfg_a, args.seed, args.dt, args.duration, args.no_noise);
    apply_overrides(&mut cfg_b, args.seed, args.dt, args.duration, args.no_noise);
    // the pair runs on one seed so the noise realizations match
    cfg_b.sim.seed = cfg_a.sim.seed;

    let cfg_a = cfg_a.resolved().map_err(|e| CliError::Validation(e.to_string()))?;
    let cfg_b = cfg_b.resolved().map_err(|e| CliError::Validation(e.to_string()))?;

    // independent state and RNG streams, so the two runs can go in parallel
    let (res_a, res_b) = std::thread::scope(|scope| {
        let handle_a = scope.spawn(|| run_scenario(&cfg_a));
        let handle_b = scope.spawn(|| run_scenario(&cfg_b));
        (handle_a.join().expect("run thread"), handle_b.join().expect("run thread"))
    });
    let (log_a, metrics_a) = res_a?;
    let (log_b, metrics_b) = res_b?;

    let drift_ratio = metrics_a.param_drift_rate / metrics_b.param_drift_rate;
    report::print_comparison(&cfg_a.name, &cfg_b.name, &metrics_a, &metrics_b, drift_ratio);

    if let Some(out) = &args.out {
        let name_b = if cfg_a.name == cfg_b.name {
            format!("{}_b", cfg_b.name)
        } else {
            cfg_b.name.clone()
        };
        report::write_artifacts(out, &cfg_a.name, &cfg_a, &log_a, &metrics_a)?;
        report::write_artifacts(out, &name_b, &cfg_b, &log_b, &metrics_b)?;
        let summary = serde_json::json!({
            "a": cfg_a.name,
            "b": cfg_b.name,
            "seed": cfg_a.sim.seed,
            "drift_a": metrics_a.param_drift_rate,
            "drift_b": metrics_b.param_drift_rate,
            "drift_ratio": drift_ratio,
            "rms_tracking_a": metrics_a.rms_tracking_overall,
            "rms_tracking_b": metrics_b.rms_tracking_overall,
        });
        let path = out.join("compare.json");
        fs::write(&path, serde_json::to_string_pretty(&summary).expect("summary") + "\n")
            .map_err(|e| CliError::io(&path, e))?;
        println!("  wrote comparison artifacts to {}", out.display());
    }
    Ok(())
}

pub fn cmd_diagnose(args: &DiagnoseArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.log).map_err(|e| CliError::io(&args.log, e))?;
    let log = TimeSeriesLog::from_csv_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", args.log.display())))?;

    let cfg_path = match &args.config {
        Some(p) => p.clone(),
        None => infer_config_path(&args.log).ok_or_else(|| {
            CliError::Validation(format!(
                "cannot infer the config echo for {}; pass --config <path>",
                args.log.display()
            ))
        })?,
    };
    let cfg = read_scenario_file(&cfg_path)?
        .resolved()
        .map_err(|e| CliError::Validation(e.to_string()))?;

    println!(
        "diagnosing `{}` ({} samples) against `{}`",
        args.log.display(),
        log.len(),
        cfg_path.display()
    );
    report::print_diagnostics(&diagnose(&log, &cfg));
    Ok(())
}

fn infer_config_path(log_path: &Path) -> Option<PathBuf> {
    let name = log_path.file_name()?.to_str()?;
    let stem = name.strip_suffix("_log.csv")?;
    Some(log_path.with_file_name(format!("{stem}_config.toml")))
}

pub fn cmd_presets(args: &PresetsArgs) -> Result<(), CliError> {
    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    for name in presets::PRESET_NAMES {
        let cfg = presets::by_name(name)
            .expect("preset names are exhaustive")
            .resolved()
            .expect("presets validate");
        let path = args.out.join(format!("{name}.toml"));
        fs::write(&path, toml::to_string_pretty(&cfg).expect("preset serialize"))
            .map_err(|e| CliError::io(&path, e))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
