//! Conditional bicycle-flow estimation toolkit.
//!
//! The crate estimates the conditional distribution of hourly bicycle
//! volumes from sequences of 10-minute weather and temporal predictors
//! using an LSTM with a Gaussian-mixture density head, benchmarks it
//! against calibration-factor and MLP baselines, and feeds the resulting
//! exposure estimates into a Poisson crash-frequency regression.
//!
//! Module map:
//! - [`numerics`]: dense matrices, seeded random streams, stable special functions
//! - [`lstm`]: LSTM cell, full-sequence forward, backpropagation through time
//! - [`mdn`]: mixture-density head, conditional density, loss, sampling
//! - [`model`]: architecture configs, unified forward/backward, parameter counts
//! - [`baselines`]: seasonal-variation-factor estimator and the MLP regressor
//! - [`train`]: Adam, dataset splitting, early stopping, the training loop, model files
//! - [`data`]: CSV ingestion, wind imputation, temporal encoding, sequence assembly
//! - [`eval`]: goodness-of-fit measures, heat bins, weekly series export
//! - [`crash`]: Poisson crash-frequency regression and exposure comparison
//! - [`synth`]: synthetic panel generator with a known conditional-mixture truth

pub mod baselines;
pub mod crash;
pub mod data;
pub mod error;
pub mod eval;
pub mod lstm;
pub mod mdn;
pub mod model;
pub mod numerics;
pub mod synth;
pub mod train;

pub use error::{Error, ErrorCategory, Result};
pub use numerics::matrix::Matrix;
pub use numerics::rng::RngStream;
