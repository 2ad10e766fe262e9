use serde::{Deserialize, Serialize};

use super::grid::TimeGrid;
use crate::error::{JumpsiftError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpSource {
    /// A compound Poisson jump.
    FiniteActivity,
    /// Aggregate infinite-activity increment above the large-jump cut.
    IaLarge,
    /// Aggregate infinite-activity increment over one simulation step.
    IaSmallAggregate,
}

impl JumpSource {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::FiniteActivity => "finite_activity",
            Self::IaLarge => "ia_large",
            Self::IaSmallAggregate => "ia_small_aggregate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub time: f64,
    pub size: f64,
    pub source: JumpSource,
}

/// `sigma^2` at the left end of every simulation step. There are
/// `substeps` steps per observation interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotVariancePath {
    pub values: Vec<f64>,
    pub substeps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub spot_variance: SpotVariancePath,
    pub jumps: Vec<JumpEvent>,
    /// Drift plus Brownian part at each observation time.
    pub continuous_part: Vec<f64>,
    /// Integrated drift over each observation interval.
    pub drift_integral: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub grid: TimeGrid,
    pub observations: Vec<f64>,
    pub ground_truth: Option<GroundTruth>,
}

impl SamplePath {
    pub fn new(grid: TimeGrid, observations: Vec<f64>) -> Result<Self> {
        if observations.len() != grid.times().len() {
            return Err(JumpsiftError::invalid(format!(
                "{} observations for {} grid times",
                observations.len(),
                grid.times().len()
            )));
        }
        if let Some(i) = observations.iter().position(|x| !x.is_finite()) {
            return Err(JumpsiftError::invalid(format!(
                "observation {i} is not finite"
            )));
        }
        Ok(Self {
            grid,
            observations,
            ground_truth: None,
        })
    }

    /// Path on a uniform grid over `[0, T]` built from increments, starting
    /// at zero.
    pub fn from_increments(increments: &[f64], horizon: f64) -> Result<Self> {
        let grid = TimeGrid::uniform(increments.len(), horizon)?;
        let mut observations = Vec::with_capacity(increments.len() + 1);
        let mut x = 0.0;
        observations.push(x);
        for d in increments {
            x += d;
            observations.push(x);
        }
        Self::new(grid, observations)
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    /// `Delta_i X = X(t_i) - X(t_{i-1})`, `i = 1..=n`, at positions `0..n`.
    pub fn increments(&self) -> Vec<f64> {
        self.observations.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn truth(&self) -> Result<&GroundTruth> {
        self.ground_truth
            .as_ref()
            .ok_or_else(|| JumpsiftError::unsupported("path carries no simulator ground truth"))
    }

    /// Finite-activity jumps grouped by the observation interval containing
    /// them: `(interval, first jump size, jump sum, count)`, sorted by interval.
    /// Non-small true jumps grouped by observation interval.
    pub fn jump_intervals(&self) -> Result<Vec<IntervalJumps>> {
        Ok(group_jump_events(&self.grid, &self.truth()?.jumps))
    }
}

/// Groups jump events by the observation interval `(t_{i-1}, t_i]` that
/// contains them, sorted by interval. Aggregate small infinite-activity
/// increments are skipped.
pub fn group_jump_events(grid: &TimeGrid, jumps: &[JumpEvent]) -> Vec<IntervalJumps> {
    let mut events: Vec<&JumpEvent> = jumps
        .iter()
        .filter(|e| e.source != JumpSource::IaSmallAggregate)
        .collect();
    events.sort_by(|a, b| a.time.total_cmp(&b.time));
    let mut out: Vec<IntervalJumps> = Vec::new();
    for e in events {
        let Some(i) = grid.interval_of(e.time) else {
            continue;
        };
        match out.last_mut() {
            Some(last) if last.interval == i => {
                last.total += e.size;
                last.count += 1;
            }
            _ => out.push(IntervalJumps {
                interval: i,
                first: e.size,
                total: e.size,
                count: 1,
            }),
        }
    }
    out
}

/// True jumps falling in one observation interval (1-based index).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalJumps {
    pub interval: usize,
    pub first: f64,
    pub total: f64,
    pub count: usize,
}

/// Left-endpoint Riemann sum of `sigma^power` over the simulation subgrid.
/// `power` must be 2 (integrated variance) or 4 (integrated quarticity).
pub fn true_integrated_variance(path: &SamplePath, power: u32) -> Result<f64> {
    if power != 2 && power != 4 {
        return Err(JumpsiftError::invalid(format!(
            "power must be 2 or 4, got {power}"
        )));
    }
    let spot = &path.truth()?.spot_variance;
    let m = spot.substeps;
    if spot.values.len() != path.n() * m {
        return Err(JumpsiftError::invalid(
            "spot variance length does not match grid and substeps",
        ));
    }
    let mut total = 0.0;
    for (i, chunk) in spot.values.chunks_exact(m).enumerate() {
        let ds = path.grid.lag(i + 1) / m as f64;
        let s: f64 = if power == 2 {
            chunk.iter().sum()
        } else {
            chunk.iter().map(|v| v * v).sum()
        };
        total += s * ds;
    }
    Ok(total)
}

/// Relabels aggregate infinite-activity events larger than `cut` in
/// absolute value as [`JumpSource::IaLarge`]. The usual cut is
/// `2 sqrt(r(h))`.
pub fn label_large_jumps(path: &mut SamplePath, cut: f64) {
    if let Some(truth) = path.ground_truth.as_mut() {
        for e in &mut truth.jumps {
            if e.source == JumpSource::IaSmallAggregate && e.size.abs() > cut {
                e.source = JumpSource::IaLarge;
            }
        }
    }
}
