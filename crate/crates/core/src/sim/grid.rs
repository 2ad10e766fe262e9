use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{JumpsiftError, Result};
use crate::rng::rng_from_seed;

/// Observation times `0 = t_0 < t_1 < ... < t_n = T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    times: Vec<f64>,
    /// Largest lag `max_i (t_i - t_{i-1})`.
    max_lag: f64,
    uniform: bool,
}

impl TimeGrid {
    pub fn uniform(n: usize, horizon: f64) -> Result<Self> {
        if n == 0 {
            return Err(JumpsiftError::invalid("grid needs at least one interval"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(JumpsiftError::invalid(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        Ok(Self {
            times: uniform_times(n, horizon),
            max_lag: horizon / n as f64,
            uniform: true,
        })
    }

    /// Uniform grid whose interior points are shifted by
    /// `U(-1/2, 1/2) * jitter * T / n`. Endpoints stay fixed.
    pub fn irregular(n: usize, horizon: f64, jitter: f64, seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&jitter) {
            return Err(JumpsiftError::invalid(format!(
                "jitter must lie in [0, 1), got {jitter}"
            )));
        }
        let mut grid = Self::uniform(n, horizon)?;
        if jitter == 0.0 {
            return Ok(grid);
        }
        let step = horizon / n as f64;
        let mut rng = rng_from_seed(seed);
        for t in &mut grid.times[1..n] {
            let u: f64 = rng.random::<f64>() - 0.5;
            *t += u * jitter * step;
        }
        grid.uniform = false;
        grid.max_lag = grid
            .times
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max);
        Ok(grid)
    }

    /// Builds a grid from explicit times. The grid is marked uniform when the
    /// times coincide bit-for-bit with [`TimeGrid::uniform`].
    pub fn from_times(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(JumpsiftError::invalid(
                "a grid needs at least two observation times",
            ));
        }
        if times[0] != 0.0 {
            return Err(JumpsiftError::invalid(format!(
                "grid must start at 0, got {}",
                times[0]
            )));
        }
        let mut max_lag = 0.0_f64;
        for (i, w) in times.windows(2).enumerate() {
            let lag = w[1] - w[0];
            if !(lag > 0.0) || !w[1].is_finite() {
                return Err(JumpsiftError::invalid(format!(
                    "times must be finite and strictly increasing (index {})",
                    i + 1
                )));
            }
            max_lag = max_lag.max(lag);
        }
        let n = times.len() - 1;
        let horizon = times[n];
        if uniform_times(n, horizon) == times {
            return Ok(Self {
                times,
                max_lag: horizon / n as f64,
                uniform: true,
            });
        }
        Ok(Self {
            times,
            max_lag,
            uniform: false,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Number of increments.
    pub fn n(&self) -> usize {
        self.times.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn max_lag(&self) -> f64 {
        self.max_lag
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Lag of interval `i` (1-based, `(t_{i-1}, t_i]`). On uniform grids this
    /// is exactly `T / n`.
    pub fn lag(&self, i: usize) -> f64 {
        if self.uniform {
            self.max_lag
        } else {
            self.times[i] - self.times[i - 1]
        }
    }

    /// Lags of all intervals, in order.
    pub fn lags(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.n()).map(move |i| self.lag(i))
    }

    /// Index of the interval `(t_{i-1}, t_i]` containing `t`, if any.
    pub fn interval_of(&self, t: f64) -> Option<usize> {
        if !(t > 0.0 && t <= self.horizon()) {
            return None;
        }
        // first index with times[i] >= t
        Some(self.times.partition_point(|&s| s < t))
    }
}

fn uniform_times(n: usize, horizon: f64) -> Vec<f64> {
    let step = horizon / n as f64;
    let mut times: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    times[n] = horizon;
    times
}
