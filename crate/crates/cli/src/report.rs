//! Artifact writing and console reporting.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use kbmrac::sim::diagnostics::DiagnosticItem;
use kbmrac::sim::metrics::RunMetrics;
use kbmrac::{ScenarioConfig, TimeSeriesLog};
use serde_json::{json, Map, Value};

use crate::commands::CliError;

pub struct ArtifactPaths {
    pub log: PathBuf,
    pub metrics: PathBuf,
    pub config: PathBuf,
}

/// Writes `<name>_log.csv`, `<name>_metrics.json` and `<name>_config.toml`.
/// The config echo is the fully resolved scenario, so the run can be
/// reproduced from the artifacts alone.
pub fn write_artifacts(
    out_dir: &Path,
    name: &str,
    cfg: &ScenarioConfig,
    log: &TimeSeriesLog,
    metrics: &RunMetrics,
) -> Result<ArtifactPaths, CliError> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;

    let paths = ArtifactPaths {
        log: out_dir.join(format!("{name}_log.csv")),
        metrics: out_dir.join(format!("{name}_metrics.json")),
        config: out_dir.join(format!("{name}_config.toml")),
    };

    let mut file = fs::File::create(&paths.log).map_err(|e| CliError::io(&paths.log, e))?;
    log.write_csv(&mut file).map_err(|e| CliError::io(&paths.log, e))?;
    file.flush().map_err(|e| CliError::io(&paths.log, e))?;

    let metrics_json = serde_json::to_string_pretty(&metrics_to_flat_json(metrics))
        .expect("metrics serialize");
    fs::write(&paths.metrics, metrics_json + "\n").map_err(|e| CliError::io(&paths.metrics, e))?;

    let echo = toml::to_string_pretty(cfg).expect("config serialize");
    fs::write(&paths.config, echo).map_err(|e| CliError::io(&paths.config, e))?;

    Ok(paths)
}

/// Flat key-value view of the run metrics. Segment entries are indexed so
/// the document stays flat.
pub fn metrics_to_flat_json(m: &RunMetrics) -> Value {
    let mut map = Map::new();
    map.insert("rms_tracking_overall".into(), json!(m.rms_tracking_overall));
    map.insert("rms_estimation".into(), json!(m.rms_estimation));
    map.insert("param_drift_rate".into(), json!(m.param_drift_rate));
    map.insert("final_k_hat".into(), json!(m.final_k_hat));
    map.insert("final_l_hat".into(), json!(m.final_l_hat));
    map.insert("final_w_hat".into(), json!(m.final_w_hat));
    map.insert("diverged".into(), json!(m.diverged));
    map.insert("gain_bound_l_max".into(), json!(m.gain_bound.l_max));
    map.insert("gain_bound_pass".into(), json!(m.gain_bound.pass));
    map.insert(
        "gain_bound_first_violation_t".into(),
        json!(m.gain_bound.first_violation_time),
    );
    for (i, seg) in m.segments.iter().enumerate() {
        map.insert(format!("seg{i:02}_start_s"), json!(seg.start_time));
        map.insert(format!("seg{i:02}_reference"), json!(seg.reference));
        map.insert(format!("seg{i:02}_rms_tracking"), json!(seg.rms_tracking));
    }
    Value::Object(map)
}

pub fn print_run_summary(cfg: &ScenarioConfig, log: &TimeSeriesLog, metrics: &RunMetrics) {
    println!(
        "scenario `{}`: {} samples over {} s (dt = {} s, seed = {})",
        cfg.name,
        log.len(),
        cfg.sim.duration,
        cfg.sim.dt,
        cfg.sim.seed
    );
    println!("  rms tracking (y vs x_m):    {:.6e}", metrics.rms_tracking_overall);
    println!("  rms estimation (x_hat - x): {:.6e}", metrics.rms_estimation);
    println!(
        "  param drift (|k|+|l|, trailing half): {:+.6e} /s",
        metrics.param_drift_rate
    );
    println!(
        "  final adapted params: k_hat = {:.6}, l_hat = {:.6}, w_hat = {:.6}",
        metrics.final_k_hat, metrics.final_l_hat, metrics.final_w_hat
    );
    println!(
        "  gain bound: L(t) in (0, {:.4}): {}",
        metrics.gain_bound.l_max,
        if metrics.gain_bound.pass { "pass" } else { "FAIL" }
    );
}

pub fn print_diagnostics(items: &[DiagnosticItem]) {
    println!("stability diagnostics:");
    for item in items {
        println!("  {:<24} {}", item.name, item.verdict);
    }
}

pub fn print_comparison(
    name_a: &str,
    name_b: &str,
    m_a: &RunMetrics,
    m_b: &RunMetrics,
    drift_ratio: f64,
) {
    println!("comparison ({name_a} vs {name_b}):");
    println!("  {:<28} {:>14} {:>14}", "metric", name_a, name_b);
    for (label, a, b) in [
        ("rms_tracking_overall", m_a.rms_tracking_overall, m_b.rms_tracking_overall),
        ("rms_estimation", m_a.rms_estimation, m_b.rms_estimation),
        ("param_drift_rate", m_a.param_drift_rate, m_b.param_drift_rate),
        ("final_k_hat", m_a.final_k_hat, m_b.final_k_hat),
        ("final_l_hat", m_a.final_l_hat, m_b.final_l_hat),
        ("final_w_hat", m_a.final_w_hat, m_b.final_w_hat),
    ] {
        println!("  {label:<28} {a:>14.6e} {b:>14.6e}");
    }
    if drift_ratio.is_finite() {
        println!("  drift ratio ({name_a} / {name_b}): {drift_ratio:.3}");
    } else {
        println!("  drift ratio ({name_a} / {name_b}): undefined (both near zero)");
    }
}
