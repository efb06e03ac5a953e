//! The noise-integration contrast: raw measurement feedback lets the
//! adapted gains drift under measurement noise, blending suppresses it.

use kbmrac::presets;
use kbmrac::sim::run_scenario;

#[test]
fn blending_suppresses_noise_driven_parameter_drift() {
    let unblended = presets::sim1_unblended();
    let blended = presets::sim1_blended();

    let (_, m_u) = run_scenario(&unblended).unwrap();
    let (_, m_b) = run_scenario(&blended).unwrap();

    assert!(
        m_u.param_drift_rate > 0.0,
        "unblended drift {:.3e} should be positive",
        m_u.param_drift_rate
    );
    assert!(
        m_b.param_drift_rate.abs() * 10.0 <= m_u.param_drift_rate,
        "drift ratio too small: unblended {:.3e}, blended {:.3e}",
        m_u.param_drift_rate,
        m_b.param_drift_rate
    );
}

#[test]
fn noiseless_runs_do_not_drift() {
    // Without noise both schemes converge; what remains of the slope is the
    // tail of the adaptation transient toward the large matched gains of the
    // heavy vehicle, two orders of magnitude below the noise-driven drift.
    for preset in [presets::sim1_unblended(), presets::sim1_blended()] {
        let mut cfg = preset;
        cfg.sim.process_noise = false;
        cfg.sim.measurement_noise = false;
        let (_, metrics) = run_scenario(&cfg).unwrap();
        assert!(
            metrics.param_drift_rate.abs() < 2e-2,
            "{}: noiseless drift {:.3e}",
            cfg.name,
            metrics.param_drift_rate
        );
    }
}
