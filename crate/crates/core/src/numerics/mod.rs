//! Minimal dense linear algebra, stable special functions, and seeded
//! random streams shared by every other module.

pub mod matrix;
pub mod rng;
pub mod special;

pub use matrix::Matrix;
pub use rng::RngStream;
pub use special::{
    log_gaussian, log_sum_exp, ln_factorial, normal_cdf, sigmoid, stable_softmax,
};
