use jumpsift::estimators::{threshold_realized_variance, ThresholdSpec};
use jumpsift::io::preset;
use jumpsift::mc::{
    build_histogram, efficiency_comparison, jump_size_clt_experiment, ks_statistic, normal_cdf,
    run_experiment, sample_moments, small_jump_bias_bound, ExperimentConfig, GridSpec,
    HistogramSpec, PoissonMixedNormal,
};
use jumpsift::rng::rng_from_seed;
use jumpsift::sim::{
    simulate, DriftSpec, JumpSizeLaw, JumpSpec, ModelConfig, TimeGrid, VolSpec,
};
use jumpsift::JumpsiftError;
use rand_distr::{Distribution, StandardNormal};
use statrs::distribution::{ContinuousCDF, Normal};

const SEED: u64 = 20_240_601;

fn desk(name: &str, n: usize, paths: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = preset(name).unwrap();
    cfg.grid = GridSpec::uniform(n, 1.0);
    cfg.n_paths = paths;
    cfg.base_seed = seed;
    cfg
}

#[test]
fn ks_of_constant_sample() {
    let d = ks_statistic(&[0.0; 50]).unwrap();
    assert!((d - 0.5).abs() < 1e-12, "{d}");
    assert!(ks_statistic(&[]).is_err());
}

#[test]
fn ks_of_plugin_quantiles() {
    let std = Normal::new(0.0, 1.0).unwrap();
    for m in [10usize, 100, 1000] {
        let xs: Vec<f64> = (1..=m)
            .map(|i| std.inverse_cdf((i as f64 - 0.5) / m as f64))
            .collect();
        let d = ks_statistic(&xs).unwrap();
        assert!((d - 0.5 / m as f64).abs() < 1e-9, "m={m}: {d}");
    }
}

#[test]
fn ks_critical_value_coverage() {
    let reps = 400;
    let mut rng = rng_from_seed(3);
    let below = (0..reps)
        .filter(|_| {
            let xs: Vec<f64> = (0..500).map(|_| StandardNormal.sample(&mut rng)).collect();
            ks_statistic(&xs).unwrap() < 0.0608
        })
        .count();
    // nominal 95%; binomial sd over 400 reps is 1.1%
    assert!(below as f64 >= 0.91 * reps as f64, "{below}/{reps}");
}

#[test]
fn normal_cdf_matches_statrs() {
    let std = Normal::new(0.0, 1.0).unwrap();
    for k in -80..=80 {
        let x = k as f64 / 10.0;
        let (a, b) = (normal_cdf(x), std.cdf(x));
        assert!((a - b).abs() <= 1e-10 * b, "x={x}: {a} vs {b}");
    }
}

#[test]
fn poisson_mixture_limits() {
    let mix = PoissonMixedNormal::new(5.0, 0.09).unwrap();
    assert!((mix.atom() - (-5.0f64).exp()).abs() < 1e-15);
    assert!((mix.cdf(0.0) - 0.5 - 0.5 * mix.atom()).abs() < 1e-12);
    assert!((mix.cdf_left(0.0) - 0.5 + 0.5 * mix.atom()).abs() < 1e-12);
    assert!(mix.cdf(-50.0) < 1e-12 && mix.cdf(50.0) > 1.0 - 1e-12);
    // with zero intensity the whole mass sits at 0
    let degenerate = PoissonMixedNormal::new(0.0, 0.09).unwrap();
    assert_eq!(degenerate.ks_distance(&[0.0; 10]).unwrap(), 0.0);
}

#[test]
fn histogram_central_mass() {
    let mut rng = rng_from_seed(11);
    let xs: Vec<f64> = (0..20_000).map(|_| StandardNormal.sample(&mut rng)).collect();
    // 16 bins over [-4, 4): the two central bins cover [-0.5, 0.5)
    let h = build_histogram(&xs, 16, (-4.0, 4.0)).unwrap();
    assert_eq!(h.total(), 20_000);
    let central = (h.counts[7] + h.counts[8]) as f64 / 20_000.0;
    assert!((central - 0.383).abs() < 0.05 * 0.383, "{central}");
    assert!(build_histogram(&[f64::NAN], 4, (0.0, 1.0)).is_err());
}

#[test]
fn desk_summary_is_roughly_standard_normal() {
    let mut cfg = desk("model1-desk", 2000, 500, SEED);
    cfg.histogram = HistogramSpec { bins: 16, lo: -4.0, hi: 4.0 };
    let s = run_experiment(&cfg).unwrap();
    let m = s.moments.unwrap();
    assert_eq!(s.n_paths, 500);
    assert_eq!(s.records.len(), 500);
    assert!(m.mean.abs() < 0.15 && (0.7..1.3).contains(&m.variance), "{m:?}");
    assert!(s.ks_statistic.unwrap() < 0.08);
    assert_eq!(s.histogram.total() as usize, 500 - s.excluded_paths);
    let central = (s.histogram.counts[7] + s.histogram.counts[8]) as f64 / 500.0;
    assert!((central - 0.383).abs() < 0.08, "{central}");
    let direct = sample_moments(&s.normalized_bias_samples()).unwrap();
    assert_eq!(direct, m);
}

#[test]
fn summary_independent_of_parallelism() {
    let mut a = desk("model2-desk", 500, 64, SEED);
    a.parallelism = 1;
    let mut b = a.clone();
    b.parallelism = 8;
    assert_eq!(run_experiment(&a).unwrap(), run_experiment(&b).unwrap());
}

#[test]
fn path_seeds_follow_base_seed() {
    let cfg = desk("model1-desk", 200, 4, 1 << 40);
    let grid = cfg.build_grid().unwrap();
    let s = run_experiment(&cfg).unwrap();
    for r in &s.records {
        assert_eq!(r.seed, (1u64 << 40) ^ r.index as u64);
        let p = simulate(&cfg.model, &grid, cfg.substeps, r.seed).unwrap();
        assert_eq!(threshold_realized_variance(&p, &cfg.threshold).unwrap(), r.iv_threshold);
    }
}

#[test]
fn threshold_at_beta_one_keeps_less() {
    let grid = TimeGrid::uniform(500, 1.0).unwrap();
    let admissible = ThresholdSpec::power_law(0.9);
    let critical = ThresholdSpec::power_law(1.0);
    let (mut lo, mut hi) = (0.0, 0.0);
    for seed in 0..200 {
        let p = simulate(&ModelConfig::model1(), &grid, 1, seed).unwrap();
        let a = threshold_realized_variance(&p, &admissible).unwrap();
        let c = threshold_realized_variance(&p, &critical).unwrap();
        // h < h^0.9, so the beta = 1 threshold is the smaller one
        assert!(c <= a);
        lo += c;
        hi += a;
    }
    assert!(lo < hi);
}

#[test]
fn consistency_improves_with_n() {
    let mut errors = Vec::new();
    for n in [500, 2000, 8000] {
        let s = run_experiment(&desk("model1-desk", n, 100, SEED)).unwrap();
        errors.push(s.iv_error.mean_abs_error);
    }
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
}

#[test]
fn jump_clt_without_jumps_is_degenerate() {
    let mut cfg = desk("model1-desk", 500, 50, SEED);
    cfg.model = ModelConfig::Custom {
        drift: DriftSpec::Zero,
        volatility: VolSpec::Constant { sigma: 0.3 },
        jumps: JumpSpec::CompoundPoisson {
            intensity: 0.0,
            size: JumpSizeLaw::Normal { mean: 0.0, std: 0.6 },
        },
    };
    let out = jump_size_clt_experiment(&cfg).unwrap();
    assert_eq!(out.limit_variance, 0.0);
    // no true jumps: only false flags contribute, and they are rare
    let zeros = out.samples.iter().filter(|&&x| x == 0.0).count();
    assert!(zeros >= 45, "{zeros}");
}

#[test]
fn jump_clt_variance_stable_under_doubling() {
    let base = 1u64 << 32;
    let var = |n| {
        jump_size_clt_experiment(&desk("model1-desk", n, 300, base))
            .unwrap()
            .sample_variance
    };
    let (v1, v2) = (var(1000), var(2000));
    let ratio = v2 / v1;
    assert!((0.7..1.4).contains(&ratio), "{v1} -> {v2}");
}

#[test]
fn jump_clt_rejects_unsupported_models() {
    let cfg = desk("model2-desk", 200, 4, SEED);
    assert!(matches!(
        jump_size_clt_experiment(&cfg),
        Err(JumpsiftError::Unsupported(_))
    ));
    let cfg = desk("model3-desk", 200, 4, SEED);
    assert!(jump_size_clt_experiment(&cfg).is_err());
}

#[test]
fn small_jump_bound_shrinks() {
    let spec = ThresholdSpec::power_law(0.99);
    let coarse = small_jump_bias_bound(0.23, &spec, 1.0 / 1000.0, 1.0);
    let fine = small_jump_bias_bound(0.23, &spec, 1.0 / 6000.0, 1.0);
    assert!(fine < coarse);
    // eps^2 = 4 h^0.99, bound = 4 h^0.99 / b
    let h: f64 = 1.0 / 6000.0;
    assert!((fine - 4.0 * h.powf(0.99) / 0.23).abs() < 1e-15);
}

#[test]
fn efficiency_needs_a_continuous_model() {
    let cfg = desk("model1-desk", 200, 4, SEED);
    assert!(matches!(
        efficiency_comparison(&cfg),
        Err(JumpsiftError::InvalidArgument(_))
    ));
    let t = efficiency_comparison(&desk("diffusion-desk", 1000, 300, SEED)).unwrap();
    assert!(t.ratio > 1.0, "{t:?}");
}
