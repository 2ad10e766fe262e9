use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, StandardNormal};

use super::grid::TimeGrid;
use super::model::{DriftSpec, JumpSizeLaw, JumpSpec, ModelConfig, VolSpec};
use super::path::{GroundTruth, JumpEvent, JumpSource, SamplePath, SpotVariancePath};
use crate::error::{JumpsiftError, Result};
use crate::rng::{rng_from_seed, PathRng};

const MAX_JUMP_RESAMPLES: usize = 100;

/// Draws from `Gamma(shape, scale)` (mean `shape * scale`).
///
/// For the tiny shapes of a Gamma subordinator over one step the draw can
/// underflow to `0.0`; that is the correctly rounded value of a variate
/// below the smallest positive double.
pub fn sample_gamma_increment<R: Rng + ?Sized>(shape: f64, scale: f64, rng: &mut R) -> Result<f64> {
    if !(shape > 0.0 && shape.is_finite()) || !(scale > 0.0 && scale.is_finite()) {
        return Err(JumpsiftError::invalid(format!(
            "gamma shape and scale must be positive, got ({shape}, {scale})"
        )));
    }
    let dist = Gamma::new(shape, scale).map_err(|e| JumpsiftError::Numeric(e.to_string()))?;
    let g = dist.sample(rng);
    if g.is_finite() && g >= 0.0 {
        Ok(g)
    } else {
        Err(JumpsiftError::Numeric(format!("gamma sampler returned {g}")))
    }
}

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Compound Poisson jumps over `(0, horizon]` in continuous time.
fn compound_poisson_events(
    rng: &mut PathRng,
    intensity: f64,
    size: JumpSizeLaw,
    horizon: f64,
) -> Result<Vec<JumpEvent>> {
    let mut events = Vec::new();
    if intensity == 0.0 {
        return Ok(events);
    }
    let wait = Exp::new(intensity).map_err(|e| JumpsiftError::Numeric(e.to_string()))?;
    let mut t = 0.0;
    loop {
        t += wait.sample(rng);
        if t > horizon {
            break;
        }
        let size = draw_jump_size(rng, size)?;
        if size != 0.0 {
            events.push(JumpEvent {
                time: t,
                size,
                source: JumpSource::FiniteActivity,
            });
        }
    }
    Ok(events)
}

fn draw_jump_size(rng: &mut PathRng, law: JumpSizeLaw) -> Result<f64> {
    match law {
        JumpSizeLaw::Normal { mean, std } => Ok(mean + std * standard_normal(rng)),
        JumpSizeLaw::LogRelative { mean, std } => {
            for _ in 0..MAX_JUMP_RESAMPLES {
                let z = mean + std * standard_normal(rng);
                if 1.0 + z > 0.0 {
                    return Ok(z.ln_1p());
                }
            }
            Err(JumpsiftError::Numeric(format!(
                "relative jump 1 + Z stayed non-positive after {MAX_JUMP_RESAMPLES} draws"
            )))
        }
    }
}

/// Simulates one path of `cfg` observed on `grid`.
///
/// Each observation interval is split into `substeps` equal simulation
/// steps. Compound Poisson jump times are drawn in continuous time first and
/// added to the step containing them; the diffusion (and any Variance Gamma
/// part) is then stepped forward. The constant-volatility Brownian part is
/// exact; the log-volatility OU process uses its exact Gaussian transition,
/// with the price noise evaluated at the step's left-end volatility.
pub fn simulate(cfg: &ModelConfig, grid: &TimeGrid, substeps: usize, seed: u64) -> Result<SamplePath> {
    cfg.validate()?;
    if substeps == 0 {
        return Err(JumpsiftError::invalid("substeps must be at least 1"));
    }
    let parts = cfg.parts();
    let n = grid.n();
    let m = substeps;
    let horizon = grid.horizon();
    let times = grid.times();
    let mut rng = rng_from_seed(seed);

    let mut cp_events = match parts.jumps {
        JumpSpec::CompoundPoisson { intensity, size } => {
            compound_poisson_events(&mut rng, intensity, size, horizon)?
        }
        _ => Vec::new(),
    };
    let mut next_cp = 0usize;

    let mut vg_events = Vec::new();
    let mut spot = Vec::with_capacity(n * m);
    let mut continuous = Vec::with_capacity(n + 1);
    let mut drift_integral = Vec::with_capacity(n);
    let mut observations = Vec::with_capacity(n + 1);

    let mut log_vol = match parts.volatility {
        VolSpec::Constant { sigma } => sigma.ln(),
        VolSpec::ExpOu { h0, .. } => h0,
    };
    let mut x_cont = 0.0;
    let mut jump_cum = 0.0;
    continuous.push(0.0);
    observations.push(0.0);

    for i in 1..=n {
        let ds = grid.lag(i) / m as f64;
        let sqrt_ds = ds.sqrt();
        let mut interval_drift = 0.0;
        for j in 0..m {
            let s_right = if j + 1 == m {
                times[i]
            } else {
                times[i - 1] + (j + 1) as f64 * ds
            };
            let sigma = match parts.volatility {
                VolSpec::Constant { sigma } => sigma,
                VolSpec::ExpOu { .. } => log_vol.exp(),
            };
            let var = sigma * sigma;
            spot.push(var);

            let drift = match parts.drift {
                DriftSpec::Zero => 0.0,
                DriftSpec::Constant { mu } => mu,
                DriftSpec::LogPrice { mu } => mu - 0.5 * var,
            };
            let z1 = standard_normal(&mut rng);
            let dx = drift * ds + sigma * sqrt_ds * z1;
            x_cont += dx;
            interval_drift += drift * ds;

            if let VolSpec::ExpOu {
                mean_reversion,
                h_bar,
                vol_of_vol,
                rho,
                ..
            } = parts.volatility
            {
                let z2 = standard_normal(&mut rng);
                let xi = rho * z1 + (1.0 - rho * rho).sqrt() * z2;
                let decay = (-mean_reversion * ds).exp();
                let sd = vol_of_vol * ((1.0 - decay * decay) / (2.0 * mean_reversion)).sqrt();
                log_vol = h_bar + (log_vol - h_bar) * decay + sd * xi;
                if !log_vol.is_finite() {
                    return Err(JumpsiftError::Numeric("log-volatility diverged".into()));
                }
            }

            if let JumpSpec::VarianceGamma {
                gamma_var,
                drift: c,
                vol,
            } = parts.jumps
            {
                let dg = sample_gamma_increment(ds / gamma_var, gamma_var, &mut rng)?;
                let z = standard_normal(&mut rng);
                let size = c * dg + vol * dg.sqrt() * z;
                if size != 0.0 {
                    jump_cum += size;
                    vg_events.push(JumpEvent {
                        time: s_right,
                        size,
                        source: JumpSource::IaSmallAggregate,
                    });
                }
            }
        }
        while next_cp < cp_events.len() && cp_events[next_cp].time <= times[i] {
            jump_cum += cp_events[next_cp].size;
            next_cp += 1;
        }
        continuous.push(x_cont);
        drift_integral.push(interval_drift);
        observations.push(x_cont + jump_cum);
    }

    cp_events.append(&mut vg_events);
    let mut path = SamplePath::new(grid.clone(), observations)?;
    path.ground_truth = Some(GroundTruth {
        spot_variance: SpotVariancePath {
            values: spot,
            substeps: m,
        },
        jumps: cp_events,
        continuous_part: continuous,
        drift_integral,
    });
    Ok(path)
}
