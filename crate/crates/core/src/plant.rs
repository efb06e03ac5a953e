//! Ground-truth plant models and the noisy measurement channel.
//!
//! These parameters are hidden from the controller by construction: the
//! simulator integrates them to generate truth signals, and the diagnostics
//! layer reads them to compute matched gains and parameter errors. Nothing
//! in [`crate::controller`] takes a plant parameter.

use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Designer's declared sign of the plant's state-transition coefficient.
///
/// `Positive` is the conservative declaration for a possibly-unstable plant
/// and additionally requires a known upper bound `a_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionSign {
    NonPositive,
    Positive,
}

impl TransitionSign {
    /// Maps a config integer (-1, 0 or 1) onto the declaration.
    pub fn from_int(v: i8) -> Option<Self> {
        match v {
            -1 | 0 => Some(Self::NonPositive),
            1 => Some(Self::Positive),
            _ => None,
        }
    }

    /// Whether a concrete transition coefficient is consistent with the claim.
    pub fn matches(self, a: f64) -> bool {
        match self {
            Self::NonPositive => a <= 0.0,
            Self::Positive => a > 0.0,
        }
    }
}

/// Scalar linear plant `x' = a*x + b*(u - w)` with a constant disturbance `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearPlantParams {
    /// State-transition coefficient (1/s). Unknown to the controller.
    pub a: f64,
    /// Input gain. Unknown to the controller except for its sign.
    pub b: f64,
    /// Constant but unknown input disturbance.
    pub w: f64,
    /// Declared sign of `a`.
    pub sign_a: TransitionSign,
    /// Known upper bound on `a` when `sign_a` is `Positive`.
    pub a_max: Option<f64>,
}

impl LinearPlantParams {
    /// Returns every violated invariant (empty when valid).
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.a.is_finite() && self.b.is_finite() && self.w.is_finite()) {
            out.push("linear plant coefficients must be finite".into());
        }
        if self.b == 0.0 {
            out.push("plant input gain b must be nonzero".into());
        }
        if !self.sign_a.matches(self.a) {
            out.push(format!(
                "declared sign_a is inconsistent with the true a = {}",
                self.a
            ));
        }
        if self.sign_a == TransitionSign::Positive {
            match self.a_max {
                Some(m) if m > 0.0 => {
                    if self.a > m {
                        out.push(format!(
                            "a = {} exceeds the declared bound a_max = {m}",
                            self.a
                        ));
                    }
                }
                _ => out.push("a_max must be given and positive when sign_a > 0".into()),
            }
        }
        out
    }
}

/// 1-DOF surge model `m_total*v' = tau - d_l*v - d_q*v*|v|`.
///
/// The default coefficients used by the built-in scenarios are illustrative
/// desk-scale values, not identified vehicle coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurgePlantParams {
    /// Total mass including added mass (kg).
    pub m_total: f64,
    /// Linear damping (kg/s).
    pub d_l: f64,
    /// Quadratic damping (kg/m).
    pub d_q: f64,
}

impl SurgePlantParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.m_total.is_finite() && self.d_l.is_finite() && self.d_q.is_finite()) {
            out.push("surge plant coefficients must be finite".into());
        }
        if self.m_total <= 0.0 {
            out.push(format!("m_total must be positive, got {}", self.m_total));
        }
        if self.d_l < 0.0 {
            out.push(format!("d_l must be non-negative, got {}", self.d_l));
        }
        if self.d_q < 0.0 {
            out.push(format!("d_q must be non-negative, got {}", self.d_q));
        }
        out
    }
}

/// Noise intensities shared by the injection side and the filter design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    /// Process-noise intensity ((state units)^2 / s).
    pub q: f64,
    /// Measurement-noise variance ((state units)^2). Divides the Kalman gain.
    pub r: f64,
    /// RNG seed for all noise streams.
    pub seed: u64,
}

impl NoiseParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.q.is_finite() || self.q < 0.0 {
            out.push(format!("Q must be finite and non-negative, got {}", self.q));
        }
        if !self.r.is_finite() || self.r <= 0.0 {
            out.push(format!("R must be finite and positive, got {}", self.r));
        }
        out
    }
}

/// Either ground-truth model the simulator can integrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlantModel {
    Linear(LinearPlantParams),
    Surge(SurgePlantParams),
}

impl PlantModel {
    /// State derivative under control input `u`.
    pub fn deriv(&self, x: f64, u: f64) -> f64 {
        match self {
            Self::Linear(p) => linear_plant_deriv(x, u, p),
            Self::Surge(p) => surge_plant_deriv(x, u, p),
        }
    }

    pub fn linear(&self) -> Option<&LinearPlantParams> {
        match self {
            Self::Linear(p) => Some(p),
            Self::Surge(_) => None,
        }
    }
}

/// `x' = a*x + b*(u - w)`.
pub fn linear_plant_deriv(x: f64, u: f64, p: &LinearPlantParams) -> f64 {
    p.a * x + p.b * (u - p.w)
}

/// `v' = (tau - d_l*v - d_q*v*|v|) / m_total`.
///
/// The quadratic damping is written `v*|v|` so it keeps the sign of `v`.
pub fn surge_plant_deriv(v: f64, tau: f64, p: &SurgePlantParams) -> f64 {
    (tau - p.d_l * v - p.d_q * v * v.abs()) / p.m_total
}

/// One zero-mean Gaussian measurement-noise sample with the given variance.
///
/// `variance <= 0` yields exactly zero without consuming the RNG stream.
pub fn measurement_noise<R: Rng>(rng: &mut R, variance: f64) -> f64 {
    if variance <= 0.0 {
        return 0.0;
    }
    Normal::new(0.0, variance.sqrt())
        .expect("finite standard deviation")
        .sample(rng)
}

/// `y = x + v` with `v ~ N(0, variance)`. With zero variance, `y == x`.
pub fn measure<R: Rng>(x: f64, rng: &mut R, variance: f64) -> f64 {
    x + measurement_noise(rng, variance)
}

/// Validates a plant/declaration pair at scenario startup.
pub fn plant_problems(model: &PlantModel) -> Vec<String> {
    match model {
        PlantModel::Linear(p) => p.problems(),
        PlantModel::Surge(p) => p.problems(),
    }
}
