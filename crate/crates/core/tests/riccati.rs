//! Riccati integration against the closed-form stationary gain, and
//! monotone covariance evolution.

use kbmrac::estimator::{riccati_deriv, steady_state_gain, ReferenceModelParams};
use kbmrac::sim::rk4::rk4_step;

const RM: ReferenceModelParams = ReferenceModelParams { a_m: 1.0, b_m: 1.0 };
const Q: f64 = 5e-7;
const R: f64 = 3e-4;

/// Integrates `P' = Q - 2*a_m*P - P^2/R` until the derivative magnitude
/// drops below `tol`, returning the trajectory.
fn integrate_riccati(p0: f64, dt: f64, tol: f64, max_steps: usize) -> Vec<f64> {
    let mut traj = vec![p0];
    let mut p = [p0];
    for i in 0..max_steps {
        if riccati_deriv(p[0], &RM, Q, R).unwrap().abs() < tol {
            break;
        }
        p = rk4_step(
            |_, s| [riccati_deriv(s[0], &RM, Q, R).unwrap()],
            i as f64 * dt,
            &p,
            dt,
        );
        traj.push(p[0]);
    }
    traj
}

#[test]
fn stationary_gain_matches_closed_form() {
    let traj = integrate_riccati(R, 0.01, 1e-14, 1_000_000);
    let p_final = *traj.last().unwrap();
    assert!(
        riccati_deriv(p_final, &RM, Q, R).unwrap().abs() < 1e-14,
        "integration did not reach stationarity"
    );
    let l_integrated = p_final / R;
    let l_closed = steady_state_gain(&RM, Q, R).unwrap();
    let rel = (l_integrated - l_closed).abs() / l_closed;
    assert!(rel < 1e-6, "relative error {rel}");
    assert!((l_closed - 8.33e-4).abs() < 1e-7, "L_inf = {l_closed}");
}

#[test]
fn covariance_evolves_monotonically() {
    for p0 in [0.0, R, 10.0 * R] {
        let traj = integrate_riccati(p0, 0.01, -1.0, 6_000);
        assert_eq!(traj.len(), 6_001);
        let rising = *traj.last().unwrap() >= traj[0];
        for (i, w) in traj.windows(2).enumerate() {
            let step = w[1] - w[0];
            let violation = if rising { -step } else { step };
            assert!(
                violation <= 1e-15,
                "P0 = {p0}: monotonicity violated by {violation:.3e} at step {i}"
            );
        }
    }
}

#[test]
fn gain_converges_from_above_and_below() {
    let l_inf = steady_state_gain(&RM, Q, R).unwrap();
    for (p0, from_above) in [(0.0, false), (10.0 * R, true)] {
        let traj = integrate_riccati(p0, 0.01, -1.0, 4_000);
        let l_end = traj.last().unwrap() / R;
        let rel = (l_end - l_inf).abs() / l_inf;
        assert!(rel < 1e-6, "P0 = {p0}: L(end) = {l_end}, L_inf = {l_inf}");
        if from_above {
            assert!(traj[0] / R > l_inf);
        } else {
            assert!(traj[0] / R < l_inf);
        }
    }
}
