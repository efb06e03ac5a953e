//! Adaptive control of scalar uncertain systems with a Kalman-Bucy observer
//! in the loop.
//!
//! The controller drives an unknown scalar plant to match a chosen reference
//! model while a Kalman-Bucy filter — built on that same reference model, so
//! it needs no true plant parameters — supplies the state estimate. A
//! logistic blending function mixes the estimate and the raw measurement in
//! the feedback and adaptation laws, which keeps the initial transient
//! stable under the time-varying filter gain and stops measurement noise
//! from being integrated into the adapted parameters.
//!
//! Modules:
//!
//! - [`plant`]: ground-truth models (scalar linear, 1-DOF surge) and the
//!   noisy measurement channel,
//! - [`estimator`]: reference model, observer and the scalar Riccati
//!   equation,
//! - [`controller`]: feedback laws, blending function and adaptation
//!   derivatives,
//! - [`stability`]: Lyapunov decrease matrices, observer-gain bounds and
//!   matched ideal gains,
//! - [`sim`]: scenario config, the RK4 closed-loop engine, CSV logs, metrics
//!   and diagnostics,
//! - [`presets`]: the built-in reference scenarios.

pub mod controller;
pub mod error;
pub mod estimator;
pub mod plant;
pub mod presets;
pub mod sim;
pub mod stability;

pub use controller::{AdaptedParams, AdaptationGains, BlendingParams, ControllerMode};
pub use error::{ConfigError, LogError, ParamError, SimError};
pub use estimator::{ObserverState, ReferenceModelParams};
pub use plant::{LinearPlantParams, NoiseParams, PlantModel, SurgePlantParams, TransitionSign};
pub use sim::{
    diagnose, run_scenario, RunMetrics, ScenarioConfig, SimState, Simulator, TimeSeriesLog,
};
pub use stability::{ErrorState, GainTrajectoryReport, LyapunovWeights, Sym2};
