use serde::{Deserialize, Serialize};

use super::clt::normalized_bias;
use super::detect::{detect_jumps, EstimatedJump};
use super::threshold::{
    bipower_variation, realized_variance, threshold_quarticity, threshold_realized_variance,
    Admissibility, ThresholdSpec,
};
use crate::error::{JumpsiftError, Result};
use crate::sim::SamplePath;

/// Everything the estimators say about one path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub n: usize,
    pub horizon: f64,
    pub max_lag: f64,
    pub iv_threshold: f64,
    /// `None` on irregular grids.
    pub iq_threshold: Option<f64>,
    pub realized_variance: f64,
    /// `None` for single-increment paths.
    pub bipower_variation: Option<f64>,
    pub flagged_intervals: Vec<usize>,
    pub jump_size_estimates: Vec<EstimatedJump>,
    pub threshold_used: ThresholdSpec,
    pub admissibility: Admissibility,
    pub admissibility_warning: bool,
    /// Present when the true integrated variance was supplied and the
    /// statistic is defined.
    pub normalized_bias: Option<f64>,
}

pub fn estimate(
    path: &SamplePath,
    spec: &ThresholdSpec,
    true_iv: Option<f64>,
) -> Result<EstimationReport> {
    let detection = detect_jumps(path, spec, None);
    let iq_threshold = match threshold_quarticity(path, spec) {
        Ok(v) => Some(v),
        Err(JumpsiftError::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let normalized_bias = match true_iv {
        Some(iv) => match normalized_bias(path, spec, iv) {
            Ok(z) => Some(z),
            Err(JumpsiftError::Unsupported(_) | JumpsiftError::DegenerateStatistic(_)) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    let admissibility = detection.admissibility.clone();
    Ok(EstimationReport {
        n: path.n(),
        horizon: path.grid.horizon(),
        max_lag: path.grid.max_lag(),
        iv_threshold: threshold_realized_variance(path, spec)?,
        iq_threshold,
        realized_variance: realized_variance(path)?,
        bipower_variation: bipower_variation(path).ok(),
        flagged_intervals: detection.flagged_intervals(),
        jump_size_estimates: detection.estimated_sizes,
        threshold_used: *spec,
        admissibility_warning: !admissibility.admissible,
        admissibility,
        normalized_bias,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_partitions_intervals() {
        let p = SamplePath::from_increments(&[0.01, -0.02, 0.15, 0.0], 1.0).unwrap();
        let spec = ThresholdSpec::power_law(0.0).with_scale(0.01);
        let r = estimate(&p, &spec, Some(0.0)).unwrap();
        assert_eq!(r.flagged_intervals, vec![3]);
        assert!((r.iv_threshold - 5e-4).abs() < 1e-18);
        assert!(r.iv_threshold <= r.realized_variance);
        let flagged: f64 = r.jump_size_estimates.iter().map(|j| j.size * j.size).sum();
        assert!((r.realized_variance - r.iv_threshold - flagged).abs() < 1e-15);
        assert!(r.normalized_bias.is_some());
        assert!(r.admissibility_warning);
    }
}
