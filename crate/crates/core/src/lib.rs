//! Tracking of compound-Poisson jump processes with a scalar Kalman filter whose
//! process-noise variance is driven by a non-linear heteroscedasticity model.
//!
//! The crate is organised by stage of the pipeline:
//!
//! * [`sim`] draws ground-truth jump trajectories and noisy observations.
//! * [`hgf`] evaluates heterogeneity generating functions (state increment to variance).
//! * [`filters`] holds the constant-Q, GARCH-adaptive and NNH-adaptive Kalman filters.
//! * [`metrics`] scores estimates (MSE, SNR, SNR improvement).
//! * [`bench`] runs the Monte Carlo comparisons and persists results.
//!
//! Runnable walkthroughs live under `examples/`; `cargo run --example table1`
//! reproduces the MSE comparison end to end.

pub mod bench;
pub mod error;
pub mod filters;
pub mod hgf;
pub mod metrics;
pub mod sim;

pub use error::{Error, Result};
