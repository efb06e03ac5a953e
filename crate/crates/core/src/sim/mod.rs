//! Scenario-driven closed-loop simulation: configuration, the fixed-step
//! engine, per-step logging, summary metrics and post-hoc diagnostics.

pub mod config;
pub mod diagnostics;
pub mod engine;
pub mod log;
pub mod metrics;
pub mod rk4;
pub mod schedule;

pub use config::{PlantConfig, ScenarioConfig};
pub use diagnostics::{diagnose, DiagnosticItem, Verdict};
pub use engine::{gaussian_increment, run_scenario, SimState, Simulator};
pub use log::{LogRow, TimeSeriesLog};
pub use metrics::{compute_metrics, RunMetrics, SegmentMetrics};
pub use schedule::ReferenceSchedule;
