use super::threshold::{threshold_realized_variance, truncated_fourth_power_sum, ThresholdSpec};
use crate::error::{JumpsiftError, Result};
use crate::sim::SamplePath;

/// Normalized bias of the threshold estimator,
///
/// `(IV_hat - IV) / sqrt((2/3) sum_i (Delta_i X)^4 1{(Delta_i X)^2 <= r})`,
///
/// asymptotically standard normal. The denominator uses the raw truncated
/// fourth-power sum; it equals `sqrt(2 h IQ_hat)`.
pub fn normalized_bias(path: &SamplePath, spec: &ThresholdSpec, true_iv: f64) -> Result<f64> {
    if !path.grid.is_uniform() {
        return Err(JumpsiftError::unsupported(
            "normalized bias needs a uniform grid",
        ));
    }
    let iv = threshold_realized_variance(path, spec)?;
    let denom = (2.0 / 3.0 * truncated_fourth_power_sum(path, spec)).sqrt();
    if !(denom > 0.0) {
        return Err(JumpsiftError::DegenerateStatistic(
            "no retained non-zero increments".into(),
        ));
    }
    Ok((iv - true_iv) / denom)
}
