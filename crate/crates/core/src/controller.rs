//! Adaptive feedback laws: the raw-measurement law, the blended
//! estimate/measurement law, and the parameter-adaptation derivatives.
//!
//! The blended law feeds back `theta*x_hat + (1-theta)*y` instead of `y`,
//! where the logistic weight `theta(e2) = 2*alpha/(1 + exp(beta*|e2|))`
//! approaches its ceiling `alpha` as the observer converges and falls
//! towards zero under large observer error. Everything here sees only the
//! measurement, the reference and the observer outputs; in particular the
//! innovation `e2 = y - x_hat` stands in for the unmeasurable `x - x_hat`.

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::plant::TransitionSign;

/// Which feedback law a scenario runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerMode {
    /// Raw measurement feedback, `u = -k_hat*y + l_hat*r + w_hat`.
    Unblended,
    /// Estimate/measurement blending via `theta(e2)`.
    Blended,
}

/// The adapted controller parameters. All start at zero by default and are
/// driven by the adaptation laws; divergence of any of them aborts a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AdaptedParams {
    pub k_hat: f64,
    pub l_hat: f64,
    pub w_hat: f64,
}

impl AdaptedParams {
    pub fn is_finite(&self) -> bool {
        self.k_hat.is_finite() && self.l_hat.is_finite() && self.w_hat.is_finite()
    }
}

/// Adaptation rates and the pieces of the Lyapunov weighting that enter the
/// adaptation laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptationGains {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    /// Lyapunov weight on the observer error; multiplies every law.
    pub m2: f64,
    /// Known sign of the plant input gain, +1 or -1.
    pub sign_b: f64,
}

impl AdaptationGains {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
            ("m2", self.m2),
        ] {
            if !v.is_finite() || v <= 0.0 {
                out.push(format!("{name} must be positive, got {v}"));
            }
        }
        if self.sign_b != 1.0 && self.sign_b != -1.0 {
            out.push(format!("sign_b must be +1 or -1, got {}", self.sign_b));
        }
        out
    }
}

/// Blending-function shape: ceiling `alpha` and steepness `beta`.
///
/// `alpha = 0` is accepted as the degenerate no-blending case, in which the
/// blended law reduces exactly to the unblended one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlendingParams {
    pub alpha: f64,
    pub beta: f64,
}

impl BlendingParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.alpha.is_finite() || !(0.0..=1.0).contains(&self.alpha) {
            out.push(format!("alpha must lie in [0, 1], got {}", self.alpha));
        }
        if !self.beta.is_finite() || self.beta <= 0.0 {
            out.push(format!("beta must be positive, got {}", self.beta));
        }
        out
    }
}

/// Blending ceiling from the designer's knowledge of the plant:
/// 1 for a non-positive transition coefficient, `a_m/(a_m + a_max)` otherwise.
pub fn compute_alpha(sign_a: TransitionSign, a_max: f64, a_m: f64) -> Result<f64, ParamError> {
    match sign_a {
        TransitionSign::NonPositive => Ok(1.0),
        TransitionSign::Positive => {
            if a_max <= 0.0 || !a_max.is_finite() {
                return Err(ParamError::InvalidAMax(a_max));
            }
            Ok(a_m / (a_m + a_max))
        }
    }
}

/// `theta(e2) = 2*alpha / (1 + exp(beta*|e2|))`, in `(0, alpha]` with the
/// maximum attained exactly at `e2 = 0`.
pub fn blending_theta(e2: f64, p: &BlendingParams) -> f64 {
    2.0 * p.alpha / (1.0 + (p.beta * e2.abs()).exp())
}

/// `u = -k_hat*y + l_hat*r + w_hat`.
pub fn control_unblended(ap: &AdaptedParams, y: f64, r_cmd: f64) -> f64 {
    -ap.k_hat * y + ap.l_hat * r_cmd + ap.w_hat
}

/// `u = -k_hat*(theta*x_hat + (1-theta)*y) + l_hat*r + w_hat`.
///
/// At `theta = 0` this is bit-for-bit [`control_unblended`]; at `theta = 1`
/// it is pure estimate feedback.
pub fn control_blended(ap: &AdaptedParams, y: f64, x_hat: f64, theta: f64, r_cmd: f64) -> f64 {
    -ap.k_hat * (theta * x_hat + (1.0 - theta) * y) + ap.l_hat * r_cmd + ap.w_hat
}

/// Adaptation derivatives `(dk_hat, dl_hat, dw_hat)` of the raw-measurement
/// scheme:
///
/// ```text
/// k_hat' =  sgn(b) * y * gamma1 * m2 * e2
/// l_hat' = -sgn(b) * r * gamma2 * m2 * e2
/// w_hat' = -sgn(b) *     gamma3 * m2 * e2
/// ```
pub fn adapt_derivs_unblended(y: f64, r_cmd: f64, e2: f64, g: &AdaptationGains) -> (f64, f64, f64) {
    let s = g.sign_b * g.m2 * e2;
    (y * g.gamma1 * s, -r_cmd * g.gamma2 * s, -g.gamma3 * s)
}

/// Blended `k_hat` adaptation: the regressor `y` is replaced by the same
/// blend the control law uses. `l_hat` and `w_hat` keep their unblended laws.
pub fn adapt_deriv_k_blended(y: f64, x_hat: f64, theta: f64, e2: f64, g: &AdaptationGains) -> f64 {
    g.sign_b * ((1.0 - theta) * y + theta * x_hat) * g.gamma1 * g.m2 * e2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn table_gains() -> AdaptationGains {
        AdaptationGains {
            gamma1: 50.0,
            gamma2: 50.0,
            gamma3: 5.0,
            m2: 70.0,
            sign_b: 1.0,
        }
    }

    #[test]
    fn alpha_for_stable_claim_is_one() {
        assert_eq!(compute_alpha(TransitionSign::NonPositive, 99.0, 1.0).unwrap(), 1.0);
        assert_eq!(compute_alpha(TransitionSign::NonPositive, -1.0, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn alpha_for_bounded_unstable_claim() {
        assert_relative_eq!(
            compute_alpha(TransitionSign::Positive, 0.1, 1.0).unwrap(),
            10.0 / 11.0,
            max_relative = 1e-15
        );
        assert_eq!(compute_alpha(TransitionSign::Positive, 1.0, 1.0).unwrap(), 0.5);
    }

    #[test]
    fn alpha_requires_positive_bound() {
        assert!(compute_alpha(TransitionSign::Positive, 0.0, 1.0).is_err());
        assert!(compute_alpha(TransitionSign::Positive, -0.1, 1.0).is_err());
    }

    #[test]
    fn theta_peak_is_alpha_exactly() {
        for &alpha in &[1.0, 10.0 / 11.0] {
            let p = BlendingParams { alpha, beta: 1.0 };
            assert_eq!(blending_theta(0.0, &p), alpha);
        }
    }

    #[test]
    fn theta_logistic_hand_value() {
        let p = BlendingParams { alpha: 1.0, beta: 1.0 };
        assert_relative_eq!(
            blending_theta(1.0, &p),
            2.0 / (1.0 + std::f64::consts::E),
            max_relative = 1e-15
        );
        assert_relative_eq!(blending_theta(1.0, &p), 0.53788, max_relative = 1e-4);
    }

    #[test]
    fn zeroed_controller_is_silent() {
        let ap = AdaptedParams::default();
        assert_eq!(control_unblended(&ap, 3.2, -1.5), 0.0);
        assert_eq!(control_blended(&ap, 3.2, 0.4, 0.5, -1.5), 0.0);
    }

    #[test]
    fn control_unblended_hand_value() {
        let ap = AdaptedParams { k_hat: 2.0, l_hat: 1.0, w_hat: 0.5 };
        assert_relative_eq!(control_unblended(&ap, 0.2, 0.2), 0.3, max_relative = 1e-14);
    }

    #[test]
    fn control_reduces_to_disturbance_estimate() {
        let ap = AdaptedParams { k_hat: 2.0, l_hat: 1.0, w_hat: 0.5 };
        assert_eq!(control_unblended(&ap, 0.0, 0.0), 0.5);
    }

    #[test]
    fn blended_theta_zero_is_unblended_bitwise() {
        let ap = AdaptedParams { k_hat: 1.7, l_hat: -0.3, w_hat: 0.9 };
        for &(y, xh, r) in &[(0.31, -2.0, 0.2), (-0.6, 0.25, 0.0), (0.0, 5.0, -1.0)] {
            assert_eq!(
                control_blended(&ap, y, xh, 0.0, r),
                control_unblended(&ap, y, r)
            );
        }
    }

    #[test]
    fn blended_theta_one_is_estimate_feedback() {
        let ap = AdaptedParams { k_hat: 1.0, l_hat: 0.0, w_hat: 0.0 };
        assert_relative_eq!(
            control_blended(&ap, 9.9, 0.5, 1.0, 0.0),
            -0.5,
            max_relative = 1e-15
        );
    }

    #[test]
    fn control_blended_hand_value() {
        let ap = AdaptedParams { k_hat: 1.0, l_hat: 0.0, w_hat: 0.0 };
        assert_relative_eq!(
            control_blended(&ap, 1.0, 0.5, 0.5, 0.0),
            -0.75,
            max_relative = 1e-15
        );
    }

    #[test]
    fn no_innovation_no_adaptation() {
        let (dk, dl, dw) = adapt_derivs_unblended(0.4, 0.2, 0.0, &table_gains());
        assert_eq!(dk, 0.0);
        assert_eq!(dl, 0.0);
        assert_eq!(dw, 0.0);
        assert_eq!(adapt_deriv_k_blended(0.4, 0.1, 0.5, 0.0, &table_gains()), 0.0);
    }

    #[test]
    fn adaptation_hand_values() {
        let g = table_gains();
        let (_, _, dw) = adapt_derivs_unblended(0.0, 0.0, 0.1, &g);
        assert_relative_eq!(dw, -35.0, max_relative = 1e-14);

        let (dk, _, _) = adapt_derivs_unblended(0.2, 0.0, 0.01, &g);
        assert_relative_eq!(dk, 7.0, max_relative = 1e-14);

        let dk_blend = adapt_deriv_k_blended(0.3, 0.1, 0.5, 0.2, &g);
        assert_relative_eq!(dk_blend, 140.0, max_relative = 1e-14);
    }

    #[test]
    fn blended_k_law_matches_unblended_when_estimate_equals_measurement() {
        let g = table_gains();
        for &theta in &[0.0, 0.3, 1.0] {
            let (dk_u, _, _) = adapt_derivs_unblended(0.7, 0.0, 0.05, &g);
            let dk_b = adapt_deriv_k_blended(0.7, 0.7, theta, 0.05, &g);
            assert_relative_eq!(dk_b, dk_u, max_relative = 1e-14);
        }
    }

    proptest! {
        #[test]
        fn theta_bounded_even_and_decreasing(
            e2 in -10.0f64..10.0,
            alpha in 0.05f64..1.0,
            beta in 0.1f64..5.0,
        ) {
            let p = BlendingParams { alpha, beta };
            let th = blending_theta(e2, &p);
            prop_assert!(th > 0.0 && th <= alpha);
            // even in e2
            prop_assert_eq!(th, blending_theta(-e2, &p));
            // strictly decreasing in |e2|
            if e2 != 0.0 {
                prop_assert!(th < alpha);
                prop_assert!(blending_theta(1.5 * e2, &p) < th);
            }
        }

        #[test]
        fn control_is_affine_in_theta(
            k_hat in -3.0f64..3.0,
            y in -2.0f64..2.0,
            x_hat in -2.0f64..2.0,
            theta in 0.0f64..1.0,
        ) {
            let ap = AdaptedParams { k_hat, l_hat: 0.4, w_hat: -0.2 };
            let u = control_blended(&ap, y, x_hat, theta, 0.3);
            let u0 = control_blended(&ap, y, x_hat, 0.0, 0.3);
            let affine = u0 - k_hat * theta * (x_hat - y);
            prop_assert!((u - affine).abs() <= 1e-12 * (1.0 + u.abs()));
        }

        #[test]
        fn adaptation_is_odd_in_innovation(
            y in -2.0f64..2.0,
            r_cmd in -1.0f64..1.0,
            e2 in -1.0f64..1.0,
        ) {
            let g = table_gains();
            let fwd = adapt_derivs_unblended(y, r_cmd, e2, &g);
            let rev = adapt_derivs_unblended(y, r_cmd, -e2, &g);
            prop_assert!((fwd.0 + rev.0).abs() <= 1e-12 * (1.0 + fwd.0.abs()));
            prop_assert!((fwd.1 + rev.1).abs() <= 1e-12 * (1.0 + fwd.1.abs()));
            prop_assert!((fwd.2 + rev.2).abs() <= 1e-12 * (1.0 + fwd.2.abs()));
        }

        #[test]
        fn blend_regressor_equals_measurement_minus_theta_innovation(
            y in -2.0f64..2.0,
            x_hat in -2.0f64..2.0,
            theta in 0.0f64..1.0,
        ) {
            // (1-theta)*y + theta*x_hat == y - theta*(y - x_hat) algebraically;
            // the left form is the one implemented so it stays meaningful
            // when y carries measurement noise.
            let lhs = (1.0 - theta) * y + theta * x_hat;
            let rhs = y - theta * (y - x_hat);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }
}
