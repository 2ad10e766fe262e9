use serde::{Deserialize, Serialize};

use super::threshold::{threshold_admissible, Admissibility, ThresholdSpec};
use crate::error::{JumpsiftError, Result};
use crate::sim::{group_jump_events, JumpEvent, JumpSource, SamplePath};

/// Estimated jump in observation interval `interval` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatedJump {
    pub interval: usize,
    pub size: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeError {
    pub interval: usize,
    pub estimated: f64,
    /// Sum of the true jumps in the interval.
    pub actual: f64,
}

/// Interval-level comparison of flags with true jumps.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct JumpMatch {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    /// Intervals holding more than one true jump.
    pub multi_jump_intervals: usize,
    pub size_errors: Vec<SizeError>,
}

impl JumpMatch {
    /// `None` when the path has no true jumps.
    pub fn recall(&self) -> Option<f64> {
        let total = self.true_positives + self.false_negatives;
        (total > 0).then(|| self.true_positives as f64 / total as f64)
    }

    /// `None` when nothing was flagged.
    pub fn precision(&self) -> Option<f64> {
        let total = self.true_positives + self.false_positives;
        (total > 0).then(|| self.true_positives as f64 / total as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpDetectionResult {
    /// `1{(Delta_i X)^2 > r}` for `i = 1..=n`, stored at position `i - 1`.
    pub indicators: Vec<bool>,
    /// `Delta_i X` on flagged intervals.
    pub estimated_sizes: Vec<EstimatedJump>,
    pub matching: Option<JumpMatch>,
    pub admissibility: Admissibility,
}

impl JumpDetectionResult {
    pub fn flagged_count(&self) -> usize {
        self.estimated_sizes.len()
    }

    /// Flagged interval indices (1-based).
    pub fn flagged_intervals(&self) -> Vec<usize> {
        self.estimated_sizes.iter().map(|e| e.interval).collect()
    }
}

/// Flags intervals whose squared increment exceeds the threshold and takes
/// the increment as the jump-size estimate. With `truth`, each true jump is
/// matched to its containing interval; intervals with several jumps count
/// once and are compared against the jump sum.
pub fn detect_jumps(
    path: &SamplePath,
    spec: &ThresholdSpec,
    truth: Option<&[JumpEvent]>,
) -> JumpDetectionResult {
    let increments = path.increments();
    let mut indicators = Vec::with_capacity(increments.len());
    let mut estimated_sizes = Vec::new();
    for (k, &d) in increments.iter().enumerate() {
        let flagged = d * d > spec.for_interval(path, k + 1);
        indicators.push(flagged);
        if flagged {
            estimated_sizes.push(EstimatedJump {
                interval: k + 1,
                size: d,
            });
        }
    }

    let matching = truth.map(|events| {
        let groups = group_jump_events(&path.grid, events);
        let mut m = JumpMatch::default();
        for g in &groups {
            if g.count > 1 {
                m.multi_jump_intervals += 1;
            }
            if indicators[g.interval - 1] {
                m.true_positives += 1;
                m.size_errors.push(SizeError {
                    interval: g.interval,
                    estimated: increments[g.interval - 1],
                    actual: g.total,
                });
            } else {
                m.false_negatives += 1;
            }
        }
        m.false_positives = estimated_sizes.len() - m.true_positives;
        m
    });

    JumpDetectionResult {
        indicators,
        estimated_sizes,
        matching,
        admissibility: threshold_admissible(spec),
    }
}

/// `sqrt(n) sum_i (gamma_hat_i - gamma_i 1{Delta_i N >= 1})`, where
/// `gamma_i` is the sum of the true jumps in interval `i` (the quantity
/// `gamma_hat_i` estimates when an interval holds several jumps).
///
/// Needs finite-activity ground truth on a uniform grid.
pub fn jump_size_error_stat(path: &SamplePath, detection: &JumpDetectionResult) -> Result<f64> {
    if !path.grid.is_uniform() {
        return Err(JumpsiftError::unsupported(
            "jump-size statistic needs a uniform grid",
        ));
    }
    let truth = path.truth()?;
    if truth
        .jumps
        .iter()
        .any(|e| e.source != JumpSource::FiniteActivity)
    {
        return Err(JumpsiftError::unsupported(
            "jump-size statistic needs finite-activity jumps",
        ));
    }
    if detection.indicators.len() != path.n() {
        return Err(JumpsiftError::invalid(
            "detection result does not belong to this path",
        ));
    }
    let estimated: f64 = detection.estimated_sizes.iter().map(|e| e.size).sum();
    let actual: f64 = group_jump_events(&path.grid, &truth.jumps)
        .iter()
        .map(|g| g.total)
        .sum();
    Ok((path.n() as f64).sqrt() * (estimated - actual))
}
