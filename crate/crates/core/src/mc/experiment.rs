use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{
    build_histogram, ks_statistic, moments_unchecked, Histogram, Moments, DEFAULT_BINS,
    DEFAULT_RANGE,
};
use crate::error::{JumpsiftError, Result};
use crate::estimators::{
    bipower_variation, detect_jumps, normalized_bias, realized_variance,
    threshold_realized_variance, ThresholdSpec,
};
use crate::rng::path_seed;
use crate::sim::{simulate, true_integrated_variance, ModelConfig, SamplePath, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub horizon: f64,
    #[serde(default)]
    pub jitter: f64,
}

impl GridSpec {
    pub fn uniform(n: usize, horizon: f64) -> Self {
        Self {
            n,
            horizon,
            jitter: 0.0,
        }
    }

    /// Irregular grids are drawn once per experiment from `seed`.
    pub fn build(&self, seed: u64) -> Result<TimeGrid> {
        if self.jitter == 0.0 {
            TimeGrid::uniform(self.n, self.horizon)
        } else {
            TimeGrid::irregular(self.n, self.horizon, self.jitter, seed)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramSpec {
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        Self {
            bins: DEFAULT_BINS,
            lo: DEFAULT_RANGE.0,
            hi: DEFAULT_RANGE.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub grid: GridSpec,
    pub substeps: usize,
    pub threshold: ThresholdSpec,
    pub n_paths: usize,
    pub base_seed: u64,
    /// Worker threads; 0 lets the thread pool decide. Results do not depend
    /// on it.
    pub parallelism: usize,
    pub histogram: HistogramSpec,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.n_paths == 0 {
            return Err(JumpsiftError::config("n_paths", "must be at least 1"));
        }
        if self.substeps == 0 {
            return Err(JumpsiftError::config("substeps", "must be at least 1"));
        }
        if self.grid.n == 0 {
            return Err(JumpsiftError::config("grid.n", "must be at least 1"));
        }
        if !(self.grid.horizon > 0.0 && self.grid.horizon.is_finite()) {
            return Err(JumpsiftError::config("grid.horizon", "must be positive"));
        }
        if !(0.0..1.0).contains(&self.grid.jitter) {
            return Err(JumpsiftError::config("grid.jitter", "must lie in [0, 1)"));
        }
        if !(self.threshold.scale > 0.0) || !self.threshold.exponent.is_finite() {
            return Err(JumpsiftError::config(
                "threshold",
                "scale must be positive and exponent finite",
            ));
        }
        let h = self.histogram;
        if h.bins == 0 || !(h.lo < h.hi) {
            return Err(JumpsiftError::config("histogram", "needs bins >= 1 and lo < hi"));
        }
        Ok(())
    }

    pub fn build_grid(&self) -> Result<TimeGrid> {
        self.grid.build(self.base_seed)
    }

    pub fn simulate_path(&self, grid: &TimeGrid, index: usize) -> Result<SamplePath> {
        simulate(
            &self.model,
            grid,
            self.substeps,
            path_seed(self.base_seed, index as u64),
        )
    }
}

/// Runs `f` over path indices `0..n_paths` and returns results in index
/// order, whatever the worker count.
pub(crate) fn map_paths<T, F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Send + Sync,
{
    let results: Vec<Result<T>> = if cfg.parallelism == 1 {
        (0..cfg.n_paths).map(&f).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallelism)
            .build()
            .map_err(|e| JumpsiftError::Numeric(format!("thread pool: {e}")))?;
        pool.install(|| (0..cfg.n_paths).into_par_iter().map(&f).collect())
    };
    results.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub index: usize,
    pub seed: u64,
    pub iv_threshold: f64,
    pub true_iv: f64,
    pub true_iq: f64,
    pub realized_variance: f64,
    pub bipower_variation: Option<f64>,
    /// `None` when the statistic is degenerate or the grid is irregular.
    pub normalized_bias: Option<f64>,
    pub flagged: usize,
    /// Interval-level matching; finite-activity models only.
    pub true_jump_intervals: Option<usize>,
    pub true_positives: Option<usize>,
    pub false_positives: Option<usize>,
    pub false_negatives: Option<usize>,
}

impl PathRecord {
    pub fn recall(&self) -> Option<f64> {
        let tp = self.true_positives?;
        let total = tp + self.false_negatives?;
        (total > 0).then(|| tp as f64 / total as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionSummary {
    /// Paths with at least one true jump.
    pub paths_with_jumps: usize,
    /// Average of per-path recall over `paths_with_jumps`.
    pub mean_recall: Option<f64>,
    pub pooled_recall: Option<f64>,
    pub pooled_precision: Option<f64>,
    pub mean_false_flags: f64,
}

/// Variances of `(estimate - IV) / sqrt(h IQ)` across paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyTable {
    pub threshold_mean: f64,
    pub threshold_variance: f64,
    pub bipower_mean: f64,
    pub bipower_variance: f64,
    /// `bipower_variance / threshold_variance`.
    pub ratio: f64,
}

/// Asymptotic variance of the normalized threshold error.
pub const THRESHOLD_ASYMPTOTIC_VARIANCE: f64 = 2.0;

/// Asymptotic variance of the normalized bipower error,
/// `pi^2/4 + pi - 3`.
pub fn bipower_asymptotic_variance() -> f64 {
    let pi = std::f64::consts::PI;
    pi * pi / 4.0 + pi - 3.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IvErrorSummary {
    pub mean_iv_threshold: f64,
    pub mean_true_iv: f64,
    pub mean_error: f64,
    pub mean_abs_error: f64,
    /// Standard error of `mean_error`.
    pub mean_error_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub n_paths: usize,
    /// Paths whose normalized bias is undefined.
    pub excluded_paths: usize,
    pub moments: Option<Moments>,
    pub ks_statistic: Option<f64>,
    pub histogram: Histogram,
    pub iv_error: IvErrorSummary,
    pub detection: Option<DetectionSummary>,
    pub efficiency: Option<EfficiencyTable>,
    pub records: Vec<PathRecord>,
}

impl McSummary {
    pub fn normalized_bias_samples(&self) -> Vec<f64> {
        self.records
            .iter()
            .filter_map(|r| r.normalized_bias)
            .collect()
    }
}

fn path_record(cfg: &ExperimentConfig, grid: &TimeGrid, index: usize) -> Result<PathRecord> {
    let path = cfg.simulate_path(grid, index)?;
    let spec = &cfg.threshold;
    let true_iv = true_integrated_variance(&path, 2)?;
    let true_iq = true_integrated_variance(&path, 4)?;
    let bias = if grid.is_uniform() {
        match normalized_bias(&path, spec, true_iv) {
            Ok(z) => Some(z),
            Err(JumpsiftError::DegenerateStatistic(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let fa = cfg.model.finite_activity();
    let truth = if fa {
        Some(path.truth()?.jumps.as_slice())
    } else {
        None
    };
    let detection = detect_jumps(&path, spec, truth);
    let matching = detection.matching.as_ref();
    Ok(PathRecord {
        index,
        seed: path_seed(cfg.base_seed, index as u64),
        iv_threshold: threshold_realized_variance(&path, spec)?,
        true_iv,
        true_iq,
        realized_variance: realized_variance(&path)?,
        bipower_variation: bipower_variation(&path).ok(),
        normalized_bias: bias,
        flagged: detection.flagged_count(),
        true_jump_intervals: matching.map(|m| m.true_positives + m.false_negatives),
        true_positives: matching.map(|m| m.true_positives),
        false_positives: matching.map(|m| m.false_positives),
        false_negatives: matching.map(|m| m.false_negatives),
    })
}

/// Simulates `n_paths` paths with seeds `base_seed ^ index`, estimates on
/// each, and aggregates. Aggregation runs over records in index order, so
/// the summary is the same for every `parallelism`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<McSummary> {
    cfg.validate()?;
    let grid = cfg.build_grid()?;
    let records = map_paths(cfg, |i| path_record(cfg, &grid, i))?;
    summarize(cfg, &grid, records)
}

fn summarize(cfg: &ExperimentConfig, grid: &TimeGrid, records: Vec<PathRecord>) -> Result<McSummary> {
    let n_paths = records.len();
    let biases: Vec<f64> = records.iter().filter_map(|r| r.normalized_bias).collect();
    let excluded_paths = n_paths - biases.len();
    let (moments, ks) = if biases.is_empty() {
        (None, None)
    } else {
        (Some(moments_unchecked(&biases)), Some(ks_statistic(&biases)?))
    };
    let h = cfg.histogram;
    let histogram = build_histogram(&biases, h.bins, (h.lo, h.hi))?;

    let errors: Vec<f64> = records.iter().map(|r| r.iv_threshold - r.true_iv).collect();
    let err_m = moments_unchecked(&errors);
    let np = n_paths as f64;
    let iv_error = IvErrorSummary {
        mean_iv_threshold: records.iter().map(|r| r.iv_threshold).sum::<f64>() / np,
        mean_true_iv: records.iter().map(|r| r.true_iv).sum::<f64>() / np,
        mean_error: err_m.mean,
        mean_abs_error: errors.iter().map(|e| e.abs()).sum::<f64>() / np,
        mean_error_se: (err_m.variance / np).sqrt(),
    };

    let detection = cfg.model.finite_activity().then(|| {
        let recalls: Vec<f64> = records.iter().filter_map(PathRecord::recall).collect();
        let tp: usize = records.iter().filter_map(|r| r.true_positives).sum();
        let fp: usize = records.iter().filter_map(|r| r.false_positives).sum();
        let fneg: usize = records.iter().filter_map(|r| r.false_negatives).sum();
        DetectionSummary {
            paths_with_jumps: recalls.len(),
            mean_recall: (!recalls.is_empty())
                .then(|| recalls.iter().sum::<f64>() / recalls.len() as f64),
            pooled_recall: (tp + fneg > 0).then(|| tp as f64 / (tp + fneg) as f64),
            pooled_precision: (tp + fp > 0).then(|| tp as f64 / (tp + fp) as f64),
            mean_false_flags: fp as f64 / np,
        }
    });

    let efficiency = if grid.is_uniform() {
        efficiency_table(&records, grid.max_lag())
    } else {
        None
    };

    Ok(McSummary {
        n_paths,
        excluded_paths,
        moments,
        ks_statistic: ks,
        histogram,
        iv_error,
        detection,
        efficiency,
        records,
    })
}

fn efficiency_table(records: &[PathRecord], h: f64) -> Option<EfficiencyTable> {
    let mut thr = Vec::with_capacity(records.len());
    let mut bpv = Vec::with_capacity(records.len());
    for r in records {
        let scale = (h * r.true_iq).sqrt();
        thr.push((r.iv_threshold - r.true_iv) / scale);
        bpv.push((r.bipower_variation? - r.true_iv) / scale);
    }
    let t = moments_unchecked(&thr);
    let b = moments_unchecked(&bpv);
    Some(EfficiencyTable {
        threshold_mean: t.mean,
        threshold_variance: t.variance,
        bipower_mean: b.mean,
        bipower_variance: b.variance,
        ratio: b.variance / t.variance,
    })
}

/// Efficiency of the threshold estimator against bipower variation under a
/// jump-free model.
pub fn efficiency_comparison(cfg: &ExperimentConfig) -> Result<EfficiencyTable> {
    if cfg.model.has_jumps() {
        return Err(JumpsiftError::invalid(
            "efficiency comparison is defined for jump-free models only",
        ));
    }
    if cfg.grid.jitter != 0.0 {
        return Err(JumpsiftError::unsupported(
            "efficiency comparison needs a uniform grid",
        ));
    }
    if cfg.grid.n < 2 {
        return Err(JumpsiftError::invalid("bipower variation needs n >= 2"));
    }
    let summary = run_experiment(cfg)?;
    summary
        .efficiency
        .ok_or_else(|| JumpsiftError::Numeric("efficiency table unavailable".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn small_cfg(model: ModelConfig, n: usize, paths: usize) -> ExperimentConfig {
        ExperimentConfig {
            model,
            grid: GridSpec::uniform(n, 1.0),
            substeps: 1,
            threshold: ThresholdSpec::power_law(0.9),
            n_paths: paths,
            base_seed: 42,
            parallelism: 1,
            histogram: HistogramSpec::default(),
        }
    }

    #[test]
    fn single_path_summary() {
        let s = run_experiment(&small_cfg(ModelConfig::model1(), 200, 1)).unwrap();
        assert_eq!(s.records.len(), 1);
        let m = s.moments.unwrap();
        assert_eq!(m.count, 1);
        assert_eq!(m.variance, 0.0);
        assert_eq!(Some(m.mean), s.records[0].normalized_bias);
    }

    #[test]
    fn conservation_of_paths() {
        let s = run_experiment(&small_cfg(ModelConfig::model1(), 100, 40)).unwrap();
        assert_eq!(s.histogram.total() as usize + s.excluded_paths, s.n_paths);
        let ks = s.ks_statistic.unwrap();
        assert!((0.0..=1.0).contains(&ks));
    }

    #[test]
    fn parallelism_does_not_change_results() {
        let mut cfg = small_cfg(ModelConfig::model2(), 100, 24);
        cfg.substeps = 2;
        let serial = run_experiment(&cfg).unwrap();
        cfg.parallelism = 4;
        assert_eq!(run_experiment(&cfg).unwrap(), serial);
    }

    #[test]
    fn efficiency_rejects_jumps() {
        let cfg = small_cfg(ModelConfig::model1(), 100, 2);
        assert!(matches!(
            efficiency_comparison(&cfg),
            Err(JumpsiftError::InvalidArgument(_))
        ));
    }

    #[test]
    fn rejects_zero_paths() {
        let cfg = small_cfg(ModelConfig::model1(), 100, 0);
        assert!(run_experiment(&cfg).is_err());
    }
}
