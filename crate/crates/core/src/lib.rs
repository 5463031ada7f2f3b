//! All-block-maxima (ABM) estimation of a positive extreme value index.
//!
//! The crate provides the ABM estimator and its competitors (disjoint and
//! sliding block maxima, Hill), the processes used to study them, the
//! asymptotic covariance of the ABM estimator with a Monte Carlo check, and
//! a seeded, schedule-independent simulation harness.

pub mod asymptotics;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod io;
pub mod numerics;
pub mod parallel;
pub mod simulation;
pub mod weights;

pub use error::{Error, Result};
pub use estimators::{
    abm_estimate, disjoint_bm_estimate, hill_estimate, k_sweep, sliding_bm_estimate,
    EstimateResult, Method,
};
pub use parallel::Parallelism;
pub use weights::{abm_weights, exp_weights, weight_approximation_error, WeightVector};
