//! Repeated-path experiments and their diagnostics.

mod experiment;
mod jump_clt;
mod small_jump;
mod stats;

pub use experiment::{
    bipower_asymptotic_variance, efficiency_comparison, run_experiment, DetectionSummary,
    EfficiencyTable, ExperimentConfig, GridSpec, HistogramSpec, IvErrorSummary, McSummary,
    PathRecord, THRESHOLD_ASYMPTOTIC_VARIANCE,
};
pub use jump_clt::{jump_size_clt_experiment, JumpSizeClt};
pub use small_jump::small_jump_bias_bound;
pub use stats::{
    build_histogram, ks_distance, ks_statistic, normal_cdf, sample_moments, Histogram, Moments,
    PoissonMixedNormal, DEFAULT_BINS, DEFAULT_RANGE,
};
