use serde::{Deserialize, Serialize};

use super::experiment::{map_paths, ExperimentConfig};
use super::stats::{moments_unchecked, PoissonMixedNormal};
use crate::error::{JumpsiftError, Result};
use crate::estimators::{detect_jumps, jump_size_error_stat};

/// Samples of the jump-size error statistic and their distance to the
/// limiting Poisson-mixed Gaussian law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpSizeClt {
    pub samples: Vec<f64>,
    /// Poisson mean `lambda T` of the jump count.
    pub jump_count_mean: f64,
    /// `T sigma^2`, the limit variance contributed by one jump.
    pub per_jump_variance: f64,
    pub sample_mean: f64,
    pub sample_variance: f64,
    /// Limit variance `T sigma^2 lambda T`.
    pub limit_variance: f64,
    pub ks_statistic: f64,
}

/// With constant `sigma` and compound Poisson jumps, the limit
/// `MN(0, T int sigma^2 dN)` is `sum_k P(N_T = k) N(0, T sigma^2 k)`.
pub fn jump_size_clt_experiment(cfg: &ExperimentConfig) -> Result<JumpSizeClt> {
    cfg.validate()?;
    let sigma = cfg.model.constant_sigma().ok_or_else(|| {
        JumpsiftError::unsupported("jump-size mixture limit is implemented for constant sigma only")
    })?;
    let intensity = match (cfg.model.finite_activity(), cfg.model.jump_intensity()) {
        (true, Some(l)) => l,
        _ => {
            return Err(JumpsiftError::unsupported(
                "jump-size statistic needs compound Poisson jumps",
            ))
        }
    };
    if cfg.grid.jitter != 0.0 {
        return Err(JumpsiftError::unsupported(
            "jump-size statistic needs a uniform grid",
        ));
    }
    let grid = cfg.build_grid()?;
    let horizon = grid.horizon();
    let samples = map_paths(cfg, |i| {
        let path = cfg.simulate_path(&grid, i)?;
        let detection = detect_jumps(&path, &cfg.threshold, None);
        jump_size_error_stat(&path, &detection)
    })?;

    let jump_count_mean = intensity * horizon;
    let per_jump_variance = horizon * sigma * sigma;
    let mix = PoissonMixedNormal::new(jump_count_mean, per_jump_variance)?;
    let ks_statistic = mix.ks_distance(&samples)?;
    let m = moments_unchecked(&samples);
    Ok(JumpSizeClt {
        jump_count_mean,
        per_jump_variance,
        sample_mean: m.mean,
        sample_variance: m.variance,
        limit_variance: per_jump_variance * jump_count_mean,
        ks_statistic,
        samples,
    })
}
