//! Lyapunov diagnostics: the quadratic-decrease matrices for both feedback
//! schemes, observer-gain bounds, matched ideal gains, and the gain
//! trajectory check.
//!
//! Along noiseless trajectories the Lyapunov candidate
//!
//! ```text
//! V = m1/2*e1^2 + m2/2*e2^2 + |b|/(2*g1)*kt^2 + |b|/(2*g2)*lt^2 + |b|/(2*g3)*wt^2
//! ```
//!
//! decreases as `V' = -e' U e` (raw-measurement law) or `V' = -e' U2 e`
//! (blended law), with `e = [e1, e2]`. Positive definiteness of `U`/`U2`
//! bounds the admissible observer gain; the bound is what
//! [`check_gain_trajectory`] verifies against a logged run.
//!
//! Everything involving the true plant parameters (`ideal_gains`, parameter
//! errors, `u2_matrix`'s `a`) belongs to the diagnostics layer only; the
//! controller never sees them.

use crate::controller::AdaptationGains;
use crate::error::ParamError;
use crate::estimator::ReferenceModelParams;
use crate::plant::LinearPlantParams;

/// Per-sample slack allowed when checking monotonicity of a logged
/// covariance trajectory.
pub const MONOTONE_TOL: f64 = 1e-15;

/// Weights of the quadratic error terms plus the positivity margin.
///
/// `delta_hat = a_m*m1 - delta` must stay positive; construct through
/// [`LyapunovWeights::new`] to have that enforced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovWeights {
    pub m1: f64,
    pub m2: f64,
    /// Margin constant, positive and typically tiny.
    pub delta: f64,
    /// Derived margin `a_m*m1 - delta`.
    pub delta_hat: f64,
}

impl LyapunovWeights {
    pub fn new(m1: f64, m2: f64, delta: f64, a_m: f64) -> Result<Self, ParamError> {
        let delta_hat = a_m * m1 - delta;
        if !(delta_hat.is_finite() && delta_hat > 0.0) {
            return Err(ParamError::NonPositiveDeltaHat(delta_hat));
        }
        Ok(Self { m1, m2, delta, delta_hat })
    }

    /// Default margin `delta = 1e-6 * a_m * m1`: strict but non-vacuous,
    /// approximating the delta -> 0 limit the bounds are stated in.
    pub fn with_default_margin(m1: f64, m2: f64, a_m: f64) -> Result<Self, ParamError> {
        Self::new(m1, m2, 1e-6 * a_m * m1, a_m)
    }
}

/// Error coordinates plus parameter errors. The parameter errors require the
/// true plant and are therefore diagnostics-only quantities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorState {
    /// Observer vs reference model, `x_hat - x_m`.
    pub e1: f64,
    /// Plant vs observer, `x - x_hat`.
    pub e2: f64,
    pub k_tilde: f64,
    pub l_tilde: f64,
    pub w_tilde: f64,
}

/// Symmetric 2x2 matrix `[[a11, a12], [a12, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl Sym2 {
    /// Leading principal minors `(a11, det)`.
    pub fn principal_minors(&self) -> (f64, f64) {
        (self.a11, self.a11 * self.a22 - self.a12 * self.a12)
    }

    pub fn is_positive_definite(&self) -> bool {
        let (m1, m2) = self.principal_minors();
        m1 > 0.0 && m2 > 0.0
    }

    /// Quadratic form `e' M e` for `e = [e1, e2]`.
    pub fn quadratic(&self, e1: f64, e2: f64) -> f64 {
        self.a11 * e1 * e1 + 2.0 * self.a12 * e1 * e2 + self.a22 * e2 * e2
    }
}

/// Matched gains `(k_star, l_star)` solving `a_m = b*k_star - a` and
/// `b_m = l_star*b`. Under `u = -k_star*x + l_star*r + w` the closed loop
/// equals the reference model exactly.
pub fn ideal_gains(
    p: &LinearPlantParams,
    rm: &ReferenceModelParams,
) -> Result<(f64, f64), ParamError> {
    if p.b == 0.0 {
        return Err(ParamError::ZeroB);
    }
    Ok(((rm.a_m + p.a) / p.b, rm.b_m / p.b))
}

/// Value of the Lyapunov candidate at an error state.
pub fn lyapunov_value(
    es: &ErrorState,
    w: &LyapunovWeights,
    g: &AdaptationGains,
    abs_b: f64,
) -> f64 {
    0.5 * w.m1 * es.e1 * es.e1
        + 0.5 * w.m2 * es.e2 * es.e2
        + abs_b / (2.0 * g.gamma1) * es.k_tilde * es.k_tilde
        + abs_b / (2.0 * g.gamma2) * es.l_tilde * es.l_tilde
        + abs_b / (2.0 * g.gamma3) * es.w_tilde * es.w_tilde
}

/// Decrease matrix of the raw-measurement scheme:
/// `[[a_m*m1, -L*m1/2], [-L*m1/2, (L + a_m)*m2]]`. Time-varying through `L`.
pub fn u_matrix_lemma(l_gain: f64, rm: &ReferenceModelParams, w: &LyapunovWeights) -> Sym2 {
    Sym2 {
        a11: rm.a_m * w.m1,
        a12: -0.5 * l_gain * w.m1,
        a22: (l_gain + rm.a_m) * w.m2,
    }
}

/// Decrease matrix of the blended scheme. The (2,2) entry picks up
/// `-theta*(a + a_m)` through the identity `b*(k_hat - k_tilde) = a + a_m`;
/// `a` is the true transition coefficient, so this is diagnostics-only.
///
/// At `theta = 0` it coincides with [`u_matrix_lemma`].
pub fn u2_matrix(
    l_gain: f64,
    theta: f64,
    a: f64,
    rm: &ReferenceModelParams,
    w: &LyapunovWeights,
) -> Sym2 {
    Sym2 {
        a11: rm.a_m * w.m1,
        a12: -0.5 * l_gain * w.m1,
        a22: w.m2 * (l_gain + rm.a_m - theta * (a + rm.a_m)),
    }
}

/// Gain bound of the raw-measurement scheme, `L_max = 4*delta_hat*m2/m1^2`.
pub fn lmax_lemma(w: &LyapunovWeights) -> Result<f64, ParamError> {
    if w.delta_hat <= 0.0 {
        return Err(ParamError::NonPositiveDeltaHat(w.delta_hat));
    }
    Ok(4.0 * w.delta_hat * w.m2 / (w.m1 * w.m1))
}

/// Gain bound of the blended scheme with `theta` at its ceiling: the largest
/// `L` satisfying the second minor condition
///
/// ```text
/// delta_hat*([L + a_m - theta_max*(a_bound + a_m)]*m2 - delta) - L^2*m1^2/4 > 0
/// ```
///
/// i.e. the positive root of the corresponding quadratic in `L`. Errors when
/// the ceiling condition `a_m - theta_max*(a_bound + a_m) >= 0` fails, which
/// means `alpha` was misconfigured relative to `a_max`.
pub fn lmax_theorem(
    theta_max: f64,
    a_bound: f64,
    rm: &ReferenceModelParams,
    w: &LyapunovWeights,
) -> Result<f64, ParamError> {
    if w.delta_hat <= 0.0 {
        return Err(ParamError::NonPositiveDeltaHat(w.delta_hat));
    }
    let margin = rm.a_m - theta_max * (a_bound + rm.a_m);
    if margin < 0.0 {
        return Err(ParamError::ThetaCeiling {
            theta_max,
            bound: rm.a_m / (rm.a_m + a_bound),
        });
    }
    let quad = 0.25 * w.m1 * w.m1;
    let lin = w.delta_hat * w.m2;
    let cnst = w.delta_hat * (margin * w.m2 - w.delta);
    // Positive root of quad*L^2 - lin*L - cnst = 0. The constant term can dip
    // slightly below zero (margin = 0 with a finite delta); the discriminant
    // stays positive there.
    let disc = (lin * lin + 4.0 * quad * cnst).max(0.0);
    Ok((lin + disc.sqrt()) / (2.0 * quad))
}

/// Verdict of [`check_gain_trajectory`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainTrajectoryReport {
    pub l_max: f64,
    /// Every logged gain lies strictly inside `(0, l_max)`.
    pub in_bounds: bool,
    /// The logged covariance is monotone within [`MONOTONE_TOL`].
    pub monotone: bool,
    pub first_out_of_bounds: Option<usize>,
    pub first_non_monotone: Option<usize>,
}

impl GainTrajectoryReport {
    pub fn pass(&self) -> bool {
        self.in_bounds && self.monotone
    }
}

/// Checks a logged gain trajectory against `(0, l_max)` and the logged
/// covariance against monotone evolution. The covariance approaches its
/// stationary value from one side, so the direction is inferred from the
/// endpoints.
pub fn check_gain_trajectory(l_log: &[f64], p_log: &[f64], l_max: f64) -> GainTrajectoryReport {
    let first_out_of_bounds = l_log.iter().position(|&l| !(l > 0.0 && l < l_max));

    let mut first_non_monotone = None;
    if p_log.len() >= 2 {
        let rising = p_log[p_log.len() - 1] >= p_log[0];
        for i in 0..p_log.len() - 1 {
            let step = p_log[i + 1] - p_log[i];
            let bad = if rising {
                step < -MONOTONE_TOL
            } else {
                step > MONOTONE_TOL
            };
            if bad {
                first_non_monotone = Some(i + 1);
                break;
            }
        }
    }

    GainTrajectoryReport {
        l_max,
        in_bounds: first_out_of_bounds.is_none(),
        monotone: first_non_monotone.is_none(),
        first_out_of_bounds,
        first_non_monotone,
    }
}
