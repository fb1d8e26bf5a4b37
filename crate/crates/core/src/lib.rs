//! Finite-convergence-time (FCT) parameter estimators built on dynamic
//! regressor extension and mixing (DREM).
//!
//! The crate provides continuous-time and discrete-time gradient estimators
//! for scalar linear regression equations `Y = Δ·θ`, the FCT reconstructions
//! that recover `θ` exactly once enough excitation has been collected, and the
//! alertness-preserving (sliding window) variants that keep that property when
//! `θ` changes. Two high-gain baselines, convergence metrics and a scenario
//! runner that writes CSV trajectories complete the toolkit.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! scenario runner and the `fctsim` binary use.

// `!(x > 0)` style guards are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod bundled;
pub mod ct;
pub mod drem;
pub mod dt;
pub mod error;
pub mod integrate;
pub mod lre;
pub mod metrics;
pub mod plot;
pub mod runner;
pub mod scalar;
pub mod scenario;
pub mod signals;
pub mod table;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type SignalSpecF64 = signals::SignalSpec<f64>;
pub type ParameterProfileF64 = signals::ParameterProfile<f64>;
pub type ScalarLreSampleF64 = lre::ScalarLreSample<f64>;
pub type VectorLreSampleF64 = lre::VectorLreSample<f64>;
pub type SquareMatrixF64 = drem::SquareMatrix<f64>;
pub type CtGainsF64 = ct::CtGains<f64>;
pub type CtEstimatorF64 = ct::CtEstimator<f64>;
pub type DtGainsF64 = dt::DtGains<f64>;
pub type DtEstimatorF64 = dt::DtEstimator<f64>;
pub type SignedPowerGradientF64 = baselines::SignedPowerGradient<f64>;
pub type ExcitationPowerEstimatorF64 = baselines::ExcitationPowerEstimator<f64>;
pub type TrajectoryTableF64 = table::TrajectoryTable<f64>;
pub type ScenarioF64 = scenario::Scenario<f64>;

pub type SignalSpecF32 = signals::SignalSpec<f32>;
pub type CtEstimatorF32 = ct::CtEstimator<f32>;
pub type DtEstimatorF32 = dt::DtEstimator<f32>;
