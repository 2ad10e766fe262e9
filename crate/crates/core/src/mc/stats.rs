//! Sample statistics and distribution distances used by the experiments.
//!
//! The normal CDF goes through `libm::erfc`, the pure-Rust port of the
//! FreeBSD msun rational approximations (error below 1 ulp), so KS values
//! do not depend on the platform's C library.

use serde::{Deserialize, Serialize};

use crate::error::{JumpsiftError, Result};

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov-Smirnov distance between `samples` and a CDF that may have
/// atoms.
///
/// `cdf` is right-continuous, `cdf_left(x)` is its left limit, and `atoms`
/// lists the jump points of the CDF. The supremum of `|F_m - F|` is
/// attained next to a sample or an atom, so both sides of every such point
/// are compared.
pub fn ks_distance<F, G>(samples: &[f64], cdf: F, cdf_left: G, atoms: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if samples.is_empty() {
        return Err(JumpsiftError::invalid("KS distance of an empty sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(JumpsiftError::invalid("KS distance of a sample containing NaN"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;

    let mut points: Vec<f64> = sorted.clone();
    points.extend_from_slice(atoms);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut d = 0.0_f64;
    for v in points {
        let below = sorted.partition_point(|&x| x < v) as f64 / m;
        let at = sorted.partition_point(|&x| x <= v) as f64 / m;
        d = d.max((at - cdf(v)).abs()).max((below - cdf_left(v)).abs());
    }
    Ok(d)
}

/// KS distance between `samples` and `N(0, 1)`.
pub fn ks_statistic(samples: &[f64]) -> Result<f64> {
    ks_distance(samples, normal_cdf, normal_cdf, &[])
}

/// Poisson mixture of centred Gaussians,
/// `F(x) = sum_k P(N = k) Phi(x / sqrt(k * unit_variance))`, `N ~ Poisson(mean)`,
/// with the `k = 0` term an atom at zero. The series stops once the
/// remaining Poisson mass is below `1e-12`.
#[derive(Debug, Clone)]
pub struct PoissonMixedNormal {
    weights: Vec<f64>,
    unit_variance: f64,
}

impl PoissonMixedNormal {
    pub fn new(mean: f64, unit_variance: f64) -> Result<Self> {
        if !(mean >= 0.0 && mean.is_finite()) {
            return Err(JumpsiftError::invalid(format!(
                "Poisson mean must be non-negative, got {mean}"
            )));
        }
        if !(unit_variance > 0.0 && unit_variance.is_finite()) {
            return Err(JumpsiftError::invalid(format!(
                "mixture variance must be positive, got {unit_variance}"
            )));
        }
        let mut weights = Vec::new();
        let mut w = (-mean).exp();
        let mut cumulative = 0.0;
        let mut k = 0usize;
        loop {
            weights.push(w);
            cumulative += w;
            if 1.0 - cumulative < 1e-12 && k as f64 >= mean {
                break;
            }
            k += 1;
            w *= mean / k as f64;
            if k > 100_000 {
                return Err(JumpsiftError::Numeric(
                    "Poisson series did not converge".into(),
                ));
            }
        }
        Ok(Self {
            weights,
            unit_variance,
        })
    }

    pub fn atom(&self) -> f64 {
        self.weights[0]
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.eval(x, x >= 0.0)
    }

    pub fn cdf_left(&self, x: f64) -> f64 {
        self.eval(x, x > 0.0)
    }

    fn eval(&self, x: f64, include_atom: bool) -> f64 {
        let mut f = if include_atom { self.weights[0] } else { 0.0 };
        for (k, w) in self.weights.iter().enumerate().skip(1) {
            f += w * normal_cdf(x / (k as f64 * self.unit_variance).sqrt());
        }
        f
    }

    pub fn ks_distance(&self, samples: &[f64]) -> Result<f64> {
        ks_distance(samples, |x| self.cdf(x), |x| self.cdf_left(x), &[0.0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    /// Unbiased (divisor `count - 1`); zero for a single sample.
    pub variance: f64,
    /// `m3 / m2^(3/2)` from biased central moments. `None` with fewer than
    /// three samples or zero spread.
    pub skewness: Option<f64>,
    /// `m4 / m2^2 - 3`. `None` with fewer than four samples or zero spread.
    pub excess_kurtosis: Option<f64>,
}

/// Mean, unbiased variance, skewness and excess kurtosis.
pub fn sample_moments(samples: &[f64]) -> Result<Moments> {
    if samples.len() < 2 {
        return Err(JumpsiftError::invalid(format!(
            "need at least 2 samples for a variance, got {}",
            samples.len()
        )));
    }
    Ok(moments_unchecked(samples))
}

pub(crate) fn moments_unchecked(samples: &[f64]) -> Moments {
    let count = samples.len();
    let n = count as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let variance = if count > 1 { m2 / (n - 1.0) } else { 0.0 };
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    let spread = m2 > 0.0;
    Moments {
        count,
        mean,
        variance,
        skewness: (count >= 3 && spread).then(|| m3 / m2.powf(1.5)),
        excess_kurtosis: (count >= 4 && spread).then(|| m4 / (m2 * m2) - 3.0),
    }
}

/// Uniform bins over `[lo, hi)`, each bin closed on the left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    pub fn bins(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        self.edges
            .windows(2)
            .zip(&self.counts)
            .map(|(e, &c)| (e[0], e[1], c))
    }
}

pub const DEFAULT_BINS: usize = 60;
pub const DEFAULT_RANGE: (f64, f64) = (-4.0, 4.0);

pub fn build_histogram(samples: &[f64], bin_count: usize, range: (f64, f64)) -> Result<Histogram> {
    let (lo, hi) = range;
    if bin_count == 0 {
        return Err(JumpsiftError::invalid("histogram needs at least one bin"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(JumpsiftError::invalid(format!(
            "invalid histogram range [{lo}, {hi})"
        )));
    }
    let width = (hi - lo) / bin_count as f64;
    let mut edges: Vec<f64> = (0..=bin_count).map(|k| lo + k as f64 * width).collect();
    edges[bin_count] = hi;
    let mut hist = Histogram {
        counts: vec![0; bin_count],
        edges,
        underflow: 0,
        overflow: 0,
    };
    for &x in samples {
        if x.is_nan() {
            return Err(JumpsiftError::invalid("histogram sample is NaN"));
        }
        if x < lo {
            hist.underflow += 1;
            continue;
        }
        if x >= hi {
            hist.overflow += 1;
            continue;
        }
        let mut k = (((x - lo) / width) as usize).min(bin_count - 1);
        // settle rounding at the edges
        if x < hist.edges[k] {
            k -= 1;
        } else if x >= hist.edges[k + 1] {
            k += 1;
        }
        hist.counts[k] += 1;
    }
    Ok(hist)
}
