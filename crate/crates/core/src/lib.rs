//! Threshold (truncated) realized variance for jump-diffusion paths.
//!
//! The crate simulates diffusions with finite- or infinite-activity jumps
//! while keeping their ground truth, estimates integrated variance and
//! quarticity with a power-law threshold `r(h) = c h^b`, locates jumps, and
//! runs Monte Carlo experiments on the normalized estimation error.
//!
//! ```
//! use jumpsift::estimators::{threshold_realized_variance, ThresholdSpec};
//! use jumpsift::sim::{simulate, ModelConfig, TimeGrid};
//!
//! let grid = TimeGrid::uniform(2000, 1.0).unwrap();
//! let path = simulate(&ModelConfig::model1(), &grid, 1, 7).unwrap();
//! let iv = threshold_realized_variance(&path, &ThresholdSpec::power_law(0.9)).unwrap();
//! assert!((iv - 0.09).abs() < 0.02);
//! ```

// `!(x > 0.0)` checks are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod estimators;
pub mod io;
pub mod mc;
pub mod rng;
pub mod sim;

pub use error::{JumpsiftError, Result};
