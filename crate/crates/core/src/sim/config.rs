//! Scenario configuration: serialized form, defaults, and validation.
//!
//! A scenario file is TOML with sections `[plant]`, `[design]`, `[schedule]`
//! and `[sim]` plus the top-level `name` and `mode` keys. Validation collects
//! every violated invariant before reporting, and [`ScenarioConfig::resolved`]
//! makes every default explicit so a config echo reproduces the run exactly.

use serde::{Deserialize, Serialize};

use crate::controller::{compute_alpha, AdaptationGains, BlendingParams, ControllerMode};
use crate::error::{ConfigError, ParamError};
use crate::estimator::ReferenceModelParams;
use crate::plant::{
    plant_problems, LinearPlantParams, NoiseParams, PlantModel, SurgePlantParams, TransitionSign,
};
use crate::sim::schedule::ReferenceSchedule;
use crate::stability::LyapunovWeights;

/// Default hard abort threshold on |k_hat|, |l_hat|, |w_hat|.
pub const DEFAULT_ABORT_THRESHOLD: f64 = 1e6;

/// A complete scenario description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub mode: ControllerMode,
    pub plant: PlantConfig,
    pub design: DesignConfig,
    pub schedule: ScheduleConfig,
    pub sim: SimConfig,
}

fn default_name() -> String {
    "scenario".to_string()
}

/// Ground-truth plant selection. The surge coefficients shipped with the
/// presets are illustrative desk-scale values, not identified vehicle
/// coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlantConfig {
    Linear {
        a: f64,
        b: f64,
        #[serde(default)]
        w: f64,
    },
    Surge {
        m_total: f64,
        d_l: f64,
        d_q: f64,
    },
}

/// Everything the designer chooses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub a_m: f64,
    pub b_m: f64,
    /// Process-noise intensity used by the filter and by the injection.
    pub q: f64,
    /// Measurement-noise variance used by the filter and by the injection.
    pub r: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub m1: f64,
    pub m2: f64,
    pub beta: f64,
    /// Declared sign of the plant transition coefficient: -1, 0 or 1.
    pub sign_a: i8,
    /// Known sign of the plant input gain: -1 or 1.
    pub sign_b: i8,
    /// Upper bound on `a`; required when `sign_a > 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_max: Option<f64>,
    /// Blending ceiling; defaults to the value derived from `sign_a`/`a_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Lyapunov margin; defaults to `1e-6 * a_m * m1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

/// Piecewise-constant reference as `[start_time_s, value]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub points: Vec<[f64; 2]>,
}

/// Integration setup, seeding, initial conditions and noise switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Integration step (s).
    pub dt: f64,
    /// Total simulated time (s).
    pub duration: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub xm0: f64,
    #[serde(default)]
    pub xhat0: f64,
    /// Initial covariance; defaults to `R` (unit initial gain).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(default)]
    pub k_hat0: f64,
    #[serde(default)]
    pub l_hat0: f64,
    #[serde(default)]
    pub w_hat0: f64,
    #[serde(default = "default_true")]
    pub process_noise: bool,
    #[serde(default = "default_true")]
    pub measurement_noise: bool,
    /// Controller sampling period; defaults to `dt` and must be an integer
    /// multiple of it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control_period: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abort_threshold: Option<f64>,
}

fn default_true() -> bool {
    true
}

impl ScenarioConfig {
    /// Fills every defaulted field and validates. Returns the fully explicit
    /// config, or every violated invariant at once.
    pub fn resolved(mut self) -> Result<Self, ConfigError> {
        if self.sim.p0.is_none() {
            self.sim.p0 = Some(self.design.r);
        }
        if self.sim.control_period.is_none() {
            self.sim.control_period = Some(self.sim.dt);
        }
        if self.sim.abort_threshold.is_none() {
            self.sim.abort_threshold = Some(DEFAULT_ABORT_THRESHOLD);
        }
        if self.design.delta.is_none() {
            self.design.delta = Some(1e-6 * self.design.a_m * self.design.m1);
        }
        if self.design.alpha.is_none() {
            if let Some(sign_a) = TransitionSign::from_int(self.design.sign_a) {
                if let Ok(alpha) =
                    compute_alpha(sign_a, self.design.a_max.unwrap_or(0.0), self.design.a_m)
                {
                    self.design.alpha = Some(alpha);
                }
            }
        }

        let problems = self.problems();
        if problems.is_empty() {
            Ok(self)
        } else {
            Err(ConfigError::new(problems))
        }
    }

    /// Validation without resolution; convenience over `clone().resolved()`.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.clone().resolved().map(|_| ())
    }

    /// Every violated invariant of the (possibly unresolved) config.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();

        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        {
            out.push(format!(
                "scenario name `{}` must be non-empty and use only [A-Za-z0-9._-]",
                self.name
            ));
        }

        // [sim]
        let s = &self.sim;
        if !(s.dt.is_finite() && s.dt > 0.0) {
            out.push(format!("dt must be positive, got {}", s.dt));
        }
        if !(s.duration.is_finite() && s.duration >= s.dt) {
            out.push(format!(
                "duration must be at least one step (dt = {}), got {}",
                s.dt, s.duration
            ));
        }
        for (name, v) in [
            ("x0", s.x0),
            ("xm0", s.xm0),
            ("xhat0", s.xhat0),
            ("k_hat0", s.k_hat0),
            ("l_hat0", s.l_hat0),
            ("w_hat0", s.w_hat0),
        ] {
            if !v.is_finite() {
                out.push(format!("initial condition {name} must be finite, got {v}"));
            }
        }
        if let Some(p0) = s.p0 {
            if !(p0.is_finite() && p0 >= 0.0) {
                out.push(format!("p0 must be finite and non-negative, got {p0}"));
            }
        }
        if let Some(cp) = s.control_period {
            if !(cp.is_finite() && cp > 0.0) {
                out.push(format!("control_period must be positive, got {cp}"));
            } else if s.dt > 0.0 {
                let ratio = cp / s.dt;
                if ratio < 1.0 - 1e-9 || (ratio - ratio.round()).abs() > 1e-6 {
                    out.push(format!(
                        "control_period ({cp}) must be an integer multiple of dt ({})",
                        s.dt
                    ));
                }
            }
        }
        if let Some(ab) = s.abort_threshold {
            if !(ab.is_finite() && ab > 0.0) {
                out.push(format!("abort_threshold must be positive, got {ab}"));
            }
        }

        // [design]
        let d = &self.design;
        out.extend(self.reference_model().problems());
        out.extend(self.noise().problems());
        out.extend(self.adaptation_gains().problems());
        if !(d.m1.is_finite() && d.m1 > 0.0) {
            out.push(format!("m1 must be positive, got {}", d.m1));
        }
        let sign_a = TransitionSign::from_int(d.sign_a);
        if sign_a.is_none() {
            out.push(format!("sign_a must be -1, 0 or 1, got {}", d.sign_a));
        }
        if sign_a == Some(TransitionSign::Positive) {
            match d.a_max {
                Some(m) if m.is_finite() && m > 0.0 => {}
                _ => out.push("a_max must be given and positive when sign_a > 0".into()),
            }
        }
        out.extend(self.blending().problems());
        if self.mode == ControllerMode::Blended && sign_a == Some(TransitionSign::Positive) {
            if let (Some(alpha), Some(a_max)) = (d.alpha, d.a_max) {
                let ceiling = d.a_m / (d.a_m + a_max);
                if alpha > ceiling + 1e-9 {
                    out.push(format!(
                        "alpha = {alpha} exceeds a_m/(a_m + a_max) = {ceiling}; \
                         the blended stability condition cannot hold"
                    ));
                }
            }
        }
        if let Some(delta) = d.delta {
            match LyapunovWeights::new(d.m1, d.m2, delta, d.a_m) {
                Ok(_) => {}
                Err(e) => out.push(e.to_string()),
            }
        }

        // [plant]
        out.extend(plant_problems(&self.plant_model()));

        // [schedule]
        out.extend(self.reference_schedule().problems());

        out
    }

    pub fn reference_model(&self) -> ReferenceModelParams {
        ReferenceModelParams {
            a_m: self.design.a_m,
            b_m: self.design.b_m,
        }
    }

    pub fn adaptation_gains(&self) -> AdaptationGains {
        AdaptationGains {
            gamma1: self.design.gamma1,
            gamma2: self.design.gamma2,
            gamma3: self.design.gamma3,
            m2: self.design.m2,
            sign_b: self.design.sign_b as f64,
        }
    }

    /// Blending parameters with `alpha` resolved (1.0 when unresolved).
    pub fn blending(&self) -> BlendingParams {
        BlendingParams {
            alpha: self.design.alpha.unwrap_or(1.0),
            beta: self.design.beta,
        }
    }

    pub fn noise(&self) -> NoiseParams {
        NoiseParams {
            q: self.design.q,
            r: self.design.r,
            seed: self.sim.seed,
        }
    }

    pub fn sign_a(&self) -> TransitionSign {
        TransitionSign::from_int(self.design.sign_a).unwrap_or(TransitionSign::NonPositive)
    }

    /// The ground-truth model with the designer declaration attached.
    pub fn plant_model(&self) -> PlantModel {
        match self.plant {
            PlantConfig::Linear { a, b, w } => PlantModel::Linear(LinearPlantParams {
                a,
                b,
                w,
                sign_a: self.sign_a(),
                a_max: self.design.a_max,
            }),
            PlantConfig::Surge { m_total, d_l, d_q } => {
                PlantModel::Surge(SurgePlantParams { m_total, d_l, d_q })
            }
        }
    }

    pub fn reference_schedule(&self) -> ReferenceSchedule {
        ReferenceSchedule::new(
            self.schedule
                .points
                .iter()
                .map(|p| (p[0], p[1]))
                .collect(),
        )
    }

    pub fn lyapunov_weights(&self) -> Result<LyapunovWeights, ParamError> {
        let delta = self
            .design
            .delta
            .unwrap_or(1e-6 * self.design.a_m * self.design.m1);
        LyapunovWeights::new(self.design.m1, self.design.m2, delta, self.design.a_m)
    }

    /// Number of integration steps; the log holds `steps() + 1` samples.
    pub fn steps(&self) -> u64 {
        (self.sim.duration / self.sim.dt + 1e-9).floor() as u64
    }

    /// Integration steps per controller sample.
    pub fn control_every(&self) -> u64 {
        let cp = self.sim.control_period.unwrap_or(self.sim.dt);
        (cp / self.sim.dt).round().max(1.0) as u64
    }
}
