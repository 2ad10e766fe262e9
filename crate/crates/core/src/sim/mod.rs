//! Path simulation with retained ground truth.

mod grid;
mod model;
mod path;
mod simulate;

pub use grid::TimeGrid;
pub use model::{DriftSpec, JumpSizeLaw, JumpSpec, ModelConfig, ModelParts, VolSpec};
pub use path::{
    group_jump_events, label_large_jumps, true_integrated_variance, GroundTruth, IntervalJumps, JumpEvent, JumpSource,
    SamplePath, SpotVariancePath,
};
pub use simulate::{sample_gamma_increment, simulate};
