//! Threshold and comparison estimators of integrated variance, jump
//! detection and the normalized bias statistic.

mod clt;
mod detect;
mod report;
mod threshold;

pub use clt::normalized_bias;
pub use detect::{
    detect_jumps, jump_size_error_stat, EstimatedJump, JumpDetectionResult, JumpMatch, SizeError,
};
pub use report::{estimate, EstimationReport};
pub use threshold::{
    bipower_variation, inclusion_mask, realized_variance, threshold_admissible,
    threshold_quarticity, threshold_realized_variance, Admissibility, ThresholdSpec,
};
