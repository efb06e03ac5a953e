//! Shared scenario builders for the integration tests.

use kbmrac::controller::ControllerMode;
use kbmrac::sim::config::{DesignConfig, PlantConfig, ScenarioConfig, ScheduleConfig, SimConfig};

/// The gain/weight column used by the reference experiments.
pub fn table_design(sign_a: i8, a_max: Option<f64>) -> DesignConfig {
    DesignConfig {
        a_m: 1.0,
        b_m: 1.0,
        q: 5e-7,
        r: 3e-4,
        gamma1: 50.0,
        gamma2: 50.0,
        gamma3: 5.0,
        m1: 1.0,
        m2: 70.0,
        beta: 1.0,
        sign_a,
        sign_b: 1,
        a_max,
        alpha: None,
        delta: None,
    }
}

pub fn noiseless_sim(dt: f64, duration: f64) -> SimConfig {
    SimConfig {
        dt,
        duration,
        seed: 1,
        x0: 0.0,
        xm0: 0.0,
        xhat0: 0.0,
        p0: None,
        k_hat0: 0.0,
        l_hat0: 0.0,
        w_hat0: 0.0,
        process_noise: false,
        measurement_noise: false,
        control_period: None,
        abort_threshold: None,
    }
}

/// Raw-measurement feedback on a stable plant with a constant disturbance:
/// the setting of the unblended convergence guarantee.
pub fn lemma_scenario(dt: f64) -> ScenarioConfig {
    ScenarioConfig {
        name: "lemma".into(),
        mode: ControllerMode::Unblended,
        plant: PlantConfig::Linear { a: -1.0, b: 1.0, w: 0.1 },
        design: table_design(-1, None),
        schedule: ScheduleConfig { points: vec![[0.0, 0.2]] },
        sim: noiseless_sim(dt, 120.0),
    }
}

/// Blended feedback on an open-loop unstable plant inside the declared
/// bound: the setting of the blended convergence guarantee. The weak
/// blending margin `a_m - alpha*(a + a_m)` makes the tail ring decay slowly,
/// so these runs use a generous duration and a fine step.
pub fn theorem_scenario(dt: f64, duration: f64) -> ScenarioConfig {
    ScenarioConfig {
        name: "theorem".into(),
        mode: ControllerMode::Blended,
        plant: PlantConfig::Linear { a: 0.05, b: 1.0, w: 0.1 },
        design: table_design(1, Some(0.1)),
        schedule: ScheduleConfig { points: vec![[0.0, 0.2]] },
        sim: noiseless_sim(dt, duration),
    }
}

/// Largest single-step increase of the logged Lyapunov value.
pub fn max_lyapunov_increase(v: &[f64]) -> f64 {
    v.windows(2).map(|w| w[1] - w[0]).fold(f64::MIN, f64::max)
}

/// Worst error over the final tenth of the run.
pub fn tail_error(log: &kbmrac::TimeSeriesLog) -> f64 {
    let n = log.len();
    let start = log.t.partition_point(|&t| t < log.t[n - 1] * 0.9);
    (start..n)
        .map(|i| log.e1[i].abs().max(log.e2_true[i].abs()))
        .fold(0.0f64, f64::max)
}
