//! Closed-loop fixed-step simulation engine.
//!
//! One step advances the plant, the reference model, the observer, the
//! Riccati covariance and the three adapted parameters together with RK4,
//! in this order:
//!
//! 1. sample the reference and (at controller sample instants) the noisy
//!    measurement,
//! 2. compute `theta` and `u` from the current estimates,
//! 3. evaluate all derivatives with `u` and `theta` held constant over the
//!    step (zero-order hold),
//! 4. integrate one `dt`,
//! 5. add the process-noise increment to the plant state (variance `Q*dt`
//!    per step, Euler-Maruyama convention),
//! 6. clamp `P >= 0` against discretization undershoot.
//!
//! The measurement *noise* sample is held over a controller period; within
//! the integrator stages the observer and the adaptation laws see
//! `y(t) = x(t) + v_held`, which in the noiseless case keeps `y = x` exact.
//!
//! One scenario owns its state and RNG streams, so independent scenarios can
//! run on parallel threads without sharing anything mutable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::controller::{
    adapt_deriv_k_blended, adapt_derivs_unblended, blending_theta, control_blended,
    AdaptedParams, AdaptationGains, BlendingParams, ControllerMode,
};
use crate::error::SimError;
use crate::estimator::{riccati_rhs, ReferenceModelParams};
use crate::plant::{measurement_noise, PlantModel};
use crate::sim::config::ScenarioConfig;
use crate::sim::log::{LogRow, TimeSeriesLog};
use crate::sim::metrics::{compute_metrics, RunMetrics};
use crate::sim::rk4::rk4_step;
use crate::sim::schedule::ReferenceSchedule;
use crate::stability::{ideal_gains, lyapunov_value, u2_matrix, ErrorState, LyapunovWeights};

/// The full integrated state vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimState {
    pub x: f64,
    pub x_m: f64,
    pub x_hat: f64,
    pub p: f64,
    pub k_hat: f64,
    pub l_hat: f64,
    pub w_hat: f64,
}

impl SimState {
    fn to_array(self) -> [f64; 7] {
        [self.x, self.x_m, self.x_hat, self.p, self.k_hat, self.l_hat, self.w_hat]
    }

    fn from_array(a: &[f64; 7]) -> Self {
        Self {
            x: a[0],
            x_m: a[1],
            x_hat: a[2],
            p: a[3],
            k_hat: a[4],
            l_hat: a[5],
            w_hat: a[6],
        }
    }

    pub fn adapted(&self) -> AdaptedParams {
        AdaptedParams {
            k_hat: self.k_hat,
            l_hat: self.l_hat,
            w_hat: self.w_hat,
        }
    }
}

/// Zero-order-held signals between controller samples.
#[derive(Debug, Clone, Copy, Default)]
struct Held {
    r_cmd: f64,
    v_meas: f64,
    theta: f64,
    u: f64,
}

/// Diagnostics-only view of the true plant (linear plants only).
#[derive(Debug, Clone, Copy)]
struct TruthDiag {
    a: f64,
    abs_b: f64,
    w: f64,
    k_star: f64,
    l_star: f64,
}

/// A running scenario. Construct with [`Simulator::new`] and advance with
/// [`Simulator::step`]; [`run_scenario`] does the whole loop plus logging.
pub struct Simulator {
    cfg: ScenarioConfig,
    schedule: ReferenceSchedule,
    plant: PlantModel,
    rm: ReferenceModelParams,
    gains: AdaptationGains,
    blend: BlendingParams,
    weights: LyapunovWeights,
    truth: Option<TruthDiag>,
    q_var: f64,
    r_var: f64,
    dt: f64,
    n_steps: u64,
    ctrl_every: u64,
    abort: f64,
    process_noise_on: bool,
    meas_noise_on: bool,
    meas_rng: ChaCha8Rng,
    proc_rng: ChaCha8Rng,
    state: SimState,
    idx: u64,
    held: Held,
    held_at: Option<u64>,
}

impl Simulator {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self, SimError> {
        let cfg = cfg.clone().resolved()?;

        let plant = cfg.plant_model();
        let rm = cfg.reference_model();
        let weights = cfg.lyapunov_weights()?;
        let truth = match plant.linear() {
            Some(lp) => {
                let (k_star, l_star) = ideal_gains(lp, &rm)?;
                Some(TruthDiag {
                    a: lp.a,
                    abs_b: lp.b.abs(),
                    w: lp.w,
                    k_star,
                    l_star,
                })
            }
            None => None,
        };

        let seed = cfg.sim.seed;
        let mut meas_rng = ChaCha8Rng::seed_from_u64(seed);
        meas_rng.set_stream(0);
        let mut proc_rng = ChaCha8Rng::seed_from_u64(seed);
        proc_rng.set_stream(1);

        let state = SimState {
            x: cfg.sim.x0,
            x_m: cfg.sim.xm0,
            x_hat: cfg.sim.xhat0,
            p: cfg.sim.p0.unwrap_or(cfg.design.r),
            k_hat: cfg.sim.k_hat0,
            l_hat: cfg.sim.l_hat0,
            w_hat: cfg.sim.w_hat0,
        };

        Ok(Self {
            schedule: cfg.reference_schedule(),
            gains: cfg.adaptation_gains(),
            blend: cfg.blending(),
            q_var: cfg.design.q,
            r_var: cfg.design.r,
            dt: cfg.sim.dt,
            n_steps: cfg.steps(),
            ctrl_every: cfg.control_every(),
            abort: cfg.sim.abort_threshold.unwrap_or(f64::INFINITY),
            process_noise_on: cfg.sim.process_noise,
            meas_noise_on: cfg.sim.measurement_noise,
            plant,
            rm,
            weights,
            truth,
            meas_rng,
            proc_rng,
            state,
            idx: 0,
            held: Held::default(),
            held_at: None,
            cfg,
        })
    }

    /// The fully resolved configuration this simulator runs.
    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.idx as f64 * self.dt
    }

    pub fn steps_total(&self) -> u64 {
        self.n_steps
    }

    pub fn weights(&self) -> &LyapunovWeights {
        &self.weights
    }

    /// Samples the reference and, at controller instants, the measurement,
    /// `theta` and `u`. Idempotent within one step index.
    fn refresh_inputs(&mut self) {
        self.held.r_cmd = self.schedule.value_at(self.time());
        if self.idx % self.ctrl_every == 0 && self.held_at != Some(self.idx) {
            let v = if self.meas_noise_on {
                measurement_noise(&mut self.meas_rng, self.r_var)
            } else {
                0.0
            };
            let y = self.state.x + v;
            let e2 = y - self.state.x_hat;
            let theta = match self.cfg.mode {
                ControllerMode::Unblended => 0.0,
                ControllerMode::Blended => blending_theta(e2, &self.blend),
            };
            self.held.v_meas = v;
            self.held.theta = theta;
            self.held.u =
                control_blended(&self.state.adapted(), y, self.state.x_hat, theta, self.held.r_cmd);
            self.held_at = Some(self.idx);
        }
    }

    /// Log record for the current instant, before integrating past it.
    pub fn current_row(&mut self) -> LogRow {
        self.refresh_inputs();
        let s = &self.state;
        let y = s.x + self.held.v_meas;
        let l_gain = s.p / self.r_var;
        let e1 = s.x_hat - s.x_m;
        let e2_true = s.x - s.x_hat;
        let (v_lyap, vdot_analytic) = match &self.truth {
            Some(td) => {
                let es = ErrorState {
                    e1,
                    e2: e2_true,
                    k_tilde: s.k_hat - td.k_star,
                    l_tilde: s.l_hat - td.l_star,
                    w_tilde: s.w_hat - td.w,
                };
                let value = lyapunov_value(&es, &self.weights, &self.gains, td.abs_b);
                let u2 = u2_matrix(l_gain, self.held.theta, td.a, &self.rm, &self.weights);
                (Some(value), Some(-u2.quadratic(e1, e2_true)))
            }
            None => (None, None),
        };
        LogRow {
            t: self.time(),
            r: self.held.r_cmd,
            x: s.x,
            y,
            x_m: s.x_m,
            x_hat: s.x_hat,
            e1,
            e2_innov: y - s.x_hat,
            e2_true,
            p: s.p,
            l: l_gain,
            k_hat: s.k_hat,
            l_hat: s.l_hat,
            w_hat: s.w_hat,
            theta: self.held.theta,
            u: self.held.u,
            v_lyap,
            vdot_analytic,
        }
    }

    /// Advances the coupled state one `dt`.
    pub fn step(&mut self) -> Result<&SimState, SimError> {
        self.refresh_inputs();

        let held = self.held;
        let v_meas = held.v_meas;
        let plant = self.plant;
        let rm = self.rm;
        let gains = self.gains;
        let (q_var, r_var) = (self.q_var, self.r_var);

        let deriv = move |_t: f64, a: &[f64; 7]| -> [f64; 7] {
            let s = SimState::from_array(a);
            let y = s.x + v_meas;
            let e2 = y - s.x_hat;
            let l_gain = s.p / r_var;
            let (_, dl_hat, dw_hat) = adapt_derivs_unblended(y, held.r_cmd, e2, &gains);
            [
                plant.deriv(s.x, held.u),
                -rm.a_m * s.x_m + rm.b_m * held.r_cmd,
                -rm.a_m * s.x_hat + rm.b_m * held.r_cmd + l_gain * (y - s.x_hat),
                riccati_rhs(s.p, rm.a_m, q_var, r_var),
                adapt_deriv_k_blended(y, s.x_hat, held.theta, e2, &gains),
                dl_hat,
                dw_hat,
            ]
        };

        let next = rk4_step(deriv, self.time(), &self.state.to_array(), self.dt);
        let mut state = SimState::from_array(&next);

        if self.process_noise_on {
            state.x += gaussian_increment(&mut self.proc_rng, self.q_var, self.dt);
        }
        state.p = state.p.max(0.0);

        self.idx += 1;
        let t = self.time();
        for (signal, value) in [
            ("x", state.x),
            ("x_m", state.x_m),
            ("x_hat", state.x_hat),
            ("P", state.p),
            ("k_hat", state.k_hat),
            ("l_hat", state.l_hat),
            ("w_hat", state.w_hat),
        ] {
            if !value.is_finite() {
                return Err(SimError::NonFinite { t, signal });
            }
        }
        for (signal, value) in [
            ("k_hat", state.k_hat),
            ("l_hat", state.l_hat),
            ("w_hat", state.w_hat),
        ] {
            if value.abs() > self.abort {
                return Err(SimError::Diverged {
                    t,
                    signal,
                    value,
                    limit: self.abort,
                });
            }
        }

        self.state = state;
        Ok(&self.state)
    }
}

/// Zero-mean Gaussian increment with variance `variance * dt`.
///
/// Exactly zero (and no RNG draw) when the variance vanishes.
pub fn gaussian_increment<R: Rng>(rng: &mut R, variance: f64, dt: f64) -> f64 {
    let v = variance * dt;
    if v <= 0.0 {
        return 0.0;
    }
    Normal::new(0.0, v.sqrt())
        .expect("finite standard deviation")
        .sample(rng)
}

/// Runs a scenario to completion: full per-step log plus summary metrics.
/// Deterministic given the config (including its seed).
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<(TimeSeriesLog, RunMetrics), SimError> {
    let mut sim = Simulator::new(cfg)?;
    let mut log = TimeSeriesLog::with_capacity(sim.steps_total() as usize + 1);
    for i in 0..=sim.steps_total() {
        log.push(sim.current_row());
        if i < sim.steps_total() {
            sim.step()?;
        }
    }
    let metrics = compute_metrics(&log, sim.weights());
    Ok((log, metrics))
}
