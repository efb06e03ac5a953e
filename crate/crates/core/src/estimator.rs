//! MRAC reference model, the Kalman-Bucy observer built on it, and the
//! scalar Riccati equation that propagates the observer gain.
//!
//! The observer deliberately uses the reference model `(a_m, b_m)` as its
//! system model, so no true plant parameter enters the estimation path:
//!
//! ```text
//! x_m'   = -a_m*x_m + b_m*r
//! x_hat' = -a_m*x_hat + b_m*r + L*(y - x_hat)
//! L      = P/R
//! P'     = Q - 2*a_m*P - P^2/R
//! ```

use crate::error::ParamError;

/// Stable first-order reference model. `a_m` is stored positive; the
/// dynamics use `-a_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceModelParams {
    pub a_m: f64,
    pub b_m: f64,
}

impl ReferenceModelParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.a_m.is_finite() && self.b_m.is_finite()) {
            out.push("reference model parameters must be finite".into());
        }
        if self.a_m <= 0.0 {
            out.push(format!("a_m must be positive, got {}", self.a_m));
        }
        out
    }
}

/// Observer state: estimate, error covariance and the gain derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObserverState {
    pub x_hat: f64,
    /// Error covariance, `P >= 0`.
    pub p: f64,
    /// Current gain, `L = P/R >= 0`.
    pub l: f64,
}

impl ObserverState {
    pub fn new(x_hat: f64, p: f64, r_var: f64) -> Result<Self, ParamError> {
        Ok(Self {
            x_hat,
            p,
            l: kalman_gain(p, r_var)?,
        })
    }
}

/// `x_m' = -a_m*x_m + b_m*r`.
pub fn reference_deriv(x_m: f64, r_cmd: f64, p: &ReferenceModelParams) -> f64 {
    -p.a_m * x_m + p.b_m * r_cmd
}

/// `x_hat' = -a_m*x_hat + b_m*r + L*(y - x_hat)`.
///
/// With `L = 0` this is exactly [`reference_deriv`] evaluated at `x_hat`.
pub fn observer_deriv(x_hat: f64, r_cmd: f64, y: f64, l_gain: f64, p: &ReferenceModelParams) -> f64 {
    -p.a_m * x_hat + p.b_m * r_cmd + l_gain * (y - x_hat)
}

/// `L = P/R`. Errors on `R <= 0`, which signals an invalid noise config.
pub fn kalman_gain(p_cov: f64, r_var: f64) -> Result<f64, ParamError> {
    if r_var <= 0.0 {
        return Err(ParamError::NonPositiveR(r_var));
    }
    Ok(p_cov / r_var)
}

pub(crate) fn riccati_rhs(p_cov: f64, a_m: f64, q_var: f64, r_var: f64) -> f64 {
    q_var - 2.0 * a_m * p_cov - p_cov * p_cov / r_var
}

/// Scalar Riccati derivative `P' = Q - 2*a_m*P - P^2/R`, i.e. the general
/// `Q - a_m*P - P*a_m - L*R*L'` with `L = P/R` substituted.
pub fn riccati_deriv(
    p_cov: f64,
    rm: &ReferenceModelParams,
    q_var: f64,
    r_var: f64,
) -> Result<f64, ParamError> {
    if r_var <= 0.0 {
        return Err(ParamError::NonPositiveR(r_var));
    }
    Ok(riccati_rhs(p_cov, rm.a_m, q_var, r_var))
}

/// Stationary gain `L_inf = -a_m + sqrt(a_m^2 + Q/R)`, the positive root of
/// the algebraic Riccati equation divided by `R`.
pub fn steady_state_gain(
    rm: &ReferenceModelParams,
    q_var: f64,
    r_var: f64,
) -> Result<f64, ParamError> {
    if r_var <= 0.0 {
        return Err(ParamError::NonPositiveR(r_var));
    }
    if q_var < 0.0 {
        return Err(ParamError::NegativeQ(q_var));
    }
    Ok(-rm.a_m + (rm.a_m * rm.a_m + q_var / r_var).sqrt())
}
