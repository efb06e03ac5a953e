//! Built-in scenario configurations for the canonical experiments.
//!
//! Three weight/gain columns are shipped: the noise-drift comparison pair
//! (`sim1_unblended` / `sim1_blended`), the bounded-unstable-claim tracking
//! scenario (`sim2`), and a `lab_like` variant with the coarser 0.1 s
//! controller step and the retuned `m2`/`gamma3`. All four drive the 1-DOF
//! surge plant; its coefficients are illustrative vehicle-scale values, not
//! identified coefficients.

use crate::controller::ControllerMode;
use crate::sim::config::{
    DesignConfig, PlantConfig, ScenarioConfig, ScheduleConfig, SimConfig,
};

pub const PRESET_NAMES: [&str; 4] = ["sim1_unblended", "sim1_blended", "sim2", "lab_like"];

/// Looks a preset up by name.
pub fn by_name(name: &str) -> Option<ScenarioConfig> {
    match name {
        "sim1_unblended" => Some(sim1_unblended()),
        "sim1_blended" => Some(sim1_blended()),
        "sim2" => Some(sim2()),
        "lab_like" => Some(lab_like()),
        _ => None,
    }
}

/// All presets in declaration order.
pub fn all() -> Vec<ScenarioConfig> {
    PRESET_NAMES
        .iter()
        .map(|n| by_name(n).expect("preset names are exhaustive"))
        .collect()
}

fn surge_plant() -> PlantConfig {
    PlantConfig::Surge {
        m_total: 60.0,
        d_l: 30.0,
        d_q: 60.0,
    }
}

fn design_stable() -> DesignConfig {
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
        sign_a: -1,
        sign_b: 1,
        a_max: None,
        alpha: None,
        delta: None,
    }
}

fn sim_section(dt: f64, duration: f64) -> SimConfig {
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
        process_noise: true,
        measurement_noise: true,
        control_period: None,
        abort_threshold: None,
    }
}

/// Three 0 -> 0.2 m/s steps with the last plateau sustained over the whole
/// trailing half of the run, so the drift metric sees a steady reference.
fn drift_schedule() -> ScheduleConfig {
    ScheduleConfig {
        points: vec![
            [0.0, 0.0],
            [10.0, 0.2],
            [25.0, 0.0],
            [40.0, 0.2],
            [50.0, 0.0],
            [60.0, 0.2],
        ],
    }
}

/// Three repetitions of the 0.2 / 0 / 0.3 m/s cycle. Starting at 0.2 makes
/// the first visit of every level a genuine transient, and entering 0.3 from
/// rest gives every level a step large enough to probe the adaptation state
/// above the measurement-noise floor.
fn tracking_schedule() -> ScheduleConfig {
    ScheduleConfig {
        points: vec![
            [0.0, 0.2],
            [15.0, 0.0],
            [30.0, 0.3],
            [45.0, 0.2],
            [60.0, 0.0],
            [75.0, 0.3],
            [90.0, 0.2],
            [105.0, 0.0],
            [120.0, 0.3],
        ],
    }
}

/// Raw measurement feedback under noise: the adapted gains integrate the
/// noise and drift. The blending ceiling is recorded as 0 for symmetry with
/// [`sim1_blended`]; the unblended law never evaluates it.
pub fn sim1_unblended() -> ScenarioConfig {
    ScenarioConfig {
        name: "sim1_unblended".into(),
        mode: ControllerMode::Unblended,
        plant: surge_plant(),
        design: DesignConfig {
            alpha: Some(0.0),
            ..design_stable()
        },
        schedule: drift_schedule(),
        sim: sim_section(0.01, 120.0),
    }
}

/// Same scenario with full blending (`alpha = 1`, stable plant claim).
pub fn sim1_blended() -> ScenarioConfig {
    ScenarioConfig {
        name: "sim1_blended".into(),
        mode: ControllerMode::Blended,
        design: DesignConfig {
            alpha: Some(1.0),
            ..design_stable()
        },
        ..sim1_unblended()
    }
}

/// Blended tracking with the conservative unstable claim (`a_max = 0.1`,
/// so `alpha` resolves to 10/11) over the 0/0.2/0.3 m/s cycle.
pub fn sim2() -> ScenarioConfig {
    ScenarioConfig {
        name: "sim2".into(),
        mode: ControllerMode::Blended,
        plant: surge_plant(),
        design: DesignConfig {
            sign_a: 1,
            a_max: Some(0.1),
            ..design_stable()
        },
        schedule: tracking_schedule(),
        sim: sim_section(0.01, 135.0),
    }
}

/// The sim2 scenario at the coarser 0.1 s step with `m2` and `gamma3`
/// retuned for it.
pub fn lab_like() -> ScenarioConfig {
    ScenarioConfig {
        name: "lab_like".into(),
        design: DesignConfig {
            sign_a: 1,
            a_max: Some(0.1),
            m2: 15.0,
            gamma3: 1.0,
            ..design_stable()
        },
        sim: SimConfig {
            control_period: Some(0.1),
            ..sim_section(0.1, 135.0)
        },
        ..sim2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for name in PRESET_NAMES {
            let cfg = by_name(name).unwrap();
            let resolved = cfg.resolved().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(resolved.name, name);
        }
    }

    #[test]
    fn sim2_alpha_resolves_to_table_value() {
        let cfg = sim2().resolved().unwrap();
        let alpha = cfg.design.alpha.unwrap();
        assert!((alpha - 10.0 / 11.0).abs() < 1e-12, "alpha = {alpha}");
    }

    #[test]
    fn sim1_pair_differs_only_in_mode_and_alpha() {
        let a = sim1_unblended();
        let b = sim1_blended();
        assert_eq!(a.schedule, b.schedule);
        assert_eq!(a.sim, b.sim);
        assert_eq!(a.plant, b.plant);
        assert_ne!(a.mode, b.mode);
    }

    #[test]
    fn unknown_preset_is_none() {
        assert!(by_name("sim3").is_none());
    }
}
