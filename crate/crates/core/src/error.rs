//! Error types shared across the crate.

use thiserror::Error;

/// A single invalid parameter passed to one of the pure operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("measurement variance R must be positive, got {0}")]
    NonPositiveR(f64),
    #[error("process variance Q must be non-negative, got {0}")]
    NegativeQ(f64),
    #[error("input gain b must be nonzero")]
    ZeroB,
    #[error("a_max must be positive when the plant may be unstable, got {0}")]
    InvalidAMax(f64),
    #[error("Lyapunov margin violated: a_m*m1 - delta = {0} must be positive")]
    NonPositiveDeltaHat(f64),
    #[error("blending ceiling {theta_max} exceeds a_m/(a_m + a_bound) = {bound}")]
    ThetaCeiling { theta_max: f64, bound: f64 },
}

/// Scenario validation failure. Collects every violated invariant so a bad
/// config is reported in one pass rather than one error at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub problems: Vec<String>,
}

impl ConfigError {
    pub fn new(problems: Vec<String>) -> Self {
        Self { problems }
    }
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "invalid scenario configuration ({} problem{}):",
            self.problems.len(),
            if self.problems.len() == 1 { "" } else { "s" }
        )?;
        for p in &self.problems {
            writeln!(f, "  - {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// Failure while running a scenario.
#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(
        "adapted state `{signal}` diverged at t = {t:.3} s \
         (|{value:.3e}| exceeds abort threshold {limit:.1e})"
    )]
    Diverged {
        t: f64,
        signal: &'static str,
        value: f64,
        limit: f64,
    },
    #[error("state `{signal}` became non-finite at t = {t:.3} s")]
    NonFinite { t: f64, signal: &'static str },
}

/// Failure while reading a serialized time-series log.
#[derive(Debug, Error)]
pub enum LogError {
    #[error("i/o error reading log: {0}")]
    Io(#[from] std::io::Error),
    #[error("log header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("log line {line}: {message}")]
    Malformed { line: usize, message: String },
}
