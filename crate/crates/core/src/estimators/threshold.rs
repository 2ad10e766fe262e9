use serde::{Deserialize, Serialize};

use crate::error::{JumpsiftError, Result};
use crate::sim::SamplePath;

/// Power-law threshold `r(dt) = scale * dt^exponent`.
///
/// Increments with `(Delta_i X)^2 <= r` are treated as jump-free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSpec {
    pub exponent: f64,
    #[serde(default = "default_scale")]
    pub scale: f64,
    /// Evaluate `r` at each interval's own lag instead of the grid's
    /// maximal lag. Only matters on irregular grids.
    #[serde(default = "default_per_interval")]
    pub per_interval: bool,
}

fn default_scale() -> f64 {
    1.0
}

fn default_per_interval() -> bool {
    true
}

impl ThresholdSpec {
    pub fn power_law(exponent: f64) -> Self {
        Self {
            exponent,
            scale: 1.0,
            per_interval: true,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn evaluate(&self, lag: f64) -> f64 {
        self.scale * lag.powf(self.exponent)
    }

    /// Threshold applied to interval `i` (1-based) of `path`.
    pub fn for_interval(&self, path: &SamplePath, i: usize) -> f64 {
        if self.per_interval {
            self.evaluate(path.grid.lag(i))
        } else {
            self.evaluate(path.grid.max_lag())
        }
    }

    pub fn admissibility(&self) -> Admissibility {
        threshold_admissible(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
}

/// Checks the two limits a threshold must satisfy as `h -> 0`:
/// `r(h) -> 0` and `h log(1/h) / r(h) -> 0`.
///
/// For `r(h) = c h^b`: the first needs `b > 0`; the second behaves like
/// `h^(1-b) log(1/h) / c`, which vanishes iff `b < 1`.
pub fn threshold_admissible(spec: &ThresholdSpec) -> Admissibility {
    let (b, c) = (spec.exponent, spec.scale);
    let reason = if !(c > 0.0 && c.is_finite()) {
        format!("scale c = {c} must be strictly positive")
    } else if !b.is_finite() {
        format!("exponent {b} is not finite")
    } else if b <= 0.0 {
        format!("r(h) = c h^{b} does not vanish as h -> 0")
    } else if b >= 1.0 {
        format!("h log(1/h) / r(h) ~ h^(1-{b}) log(1/h) does not vanish as h -> 0")
    } else {
        return Admissibility {
            admissible: true,
            reason: format!("0 < {b} < 1 and c = {c} > 0"),
        };
    };
    Admissibility {
        admissible: false,
        reason,
    }
}

/// Per-interval inclusion indicators `(Delta_i X)^2 <= r`. Ties are kept.
pub fn inclusion_mask(path: &SamplePath, spec: &ThresholdSpec) -> Vec<bool> {
    path.increments()
        .iter()
        .enumerate()
        .map(|(k, d)| d * d <= spec.for_interval(path, k + 1))
        .collect()
}

/// `sum_i (Delta_i X)^2`.
pub fn realized_variance(path: &SamplePath) -> Result<f64> {
    if path.observations.len() < 2 {
        return Err(JumpsiftError::invalid("need at least two observations"));
    }
    Ok(path.increments().iter().map(|d| d * d).sum())
}

/// `sum_i (Delta_i X)^2 1{(Delta_i X)^2 <= r}`.
pub fn threshold_realized_variance(path: &SamplePath, spec: &ThresholdSpec) -> Result<f64> {
    if path.observations.len() < 2 {
        return Err(JumpsiftError::invalid("need at least two observations"));
    }
    let mut total = 0.0;
    for (k, d) in path.increments().iter().enumerate() {
        let sq = d * d;
        if sq <= spec.for_interval(path, k + 1) {
            total += sq;
        }
    }
    Ok(total)
}

/// Sum of retained fourth powers, `sum_i (Delta_i X)^4 1{...}`.
pub(crate) fn truncated_fourth_power_sum(path: &SamplePath, spec: &ThresholdSpec) -> f64 {
    path.increments()
        .iter()
        .enumerate()
        .filter_map(|(k, d)| {
            let sq = d * d;
            (sq <= spec.for_interval(path, k + 1)).then_some(sq * sq)
        })
        .sum()
}

/// Threshold estimator of integrated quarticity,
/// `sum_i (Delta_i X)^4 1{...} / (3h)`. Uniform grids only.
pub fn threshold_quarticity(path: &SamplePath, spec: &ThresholdSpec) -> Result<f64> {
    if !path.grid.is_uniform() {
        return Err(JumpsiftError::unsupported(
            "threshold quarticity needs a uniform grid (single lag h)",
        ));
    }
    let h = path.grid.max_lag();
    Ok(truncated_fourth_power_sum(path, spec) / (3.0 * h))
}

/// `(pi/2) sum_{i=2..n} |Delta_i X| |Delta_{i-1} X|`.
pub fn bipower_variation(path: &SamplePath) -> Result<f64> {
    if path.n() < 2 {
        return Err(JumpsiftError::invalid(
            "bipower variation needs at least two increments",
        ));
    }
    let inc = path.increments();
    let s: f64 = inc.windows(2).map(|w| w[0].abs() * w[1].abs()).sum();
    Ok(std::f64::consts::FRAC_PI_2 * s)
}
