//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line.
//!
//! Run with `cargo test -p jumpsift --test acceptance -- --nocapture` to see
//! the report lines.

use std::time::Instant;

use jumpsift::estimators::{
    bipower_variation, detect_jumps, realized_variance, threshold_admissible,
    threshold_quarticity, threshold_realized_variance, ThresholdSpec,
};
use jumpsift::io::{histogram_csv, preset, to_json};
use jumpsift::mc::{
    bipower_asymptotic_variance, efficiency_comparison, jump_size_clt_experiment, run_experiment,
    small_jump_bias_bound, ExperimentConfig, GridSpec, McSummary,
};
use jumpsift::sim::{ModelConfig, SamplePath};
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};

const SEED: u64 = 20_240_601;

fn report(id: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {detail}");
}

fn cfg_with(name: &str, n: usize, paths: usize) -> ExperimentConfig {
    let mut cfg = preset(name).unwrap();
    cfg.grid = GridSpec::uniform(n, 1.0);
    cfg.n_paths = paths;
    cfg.base_seed = SEED;
    cfg
}

fn normality(s: &McSummary) -> (f64, f64, f64) {
    let m = s.moments.expect("moments");
    (s.ks_statistic.expect("ks"), m.mean, m.variance)
}

fn desk_normality_ok(ks: f64, mean: f64, var: f64) -> bool {
    ks < 0.08 && mean.abs() <= 0.15 && (0.7..=1.3).contains(&var)
}

#[test]
fn c01_model1_normalized_bias_is_standard_normal() {
    let mut cfg = preset("model1-desk").unwrap();
    cfg.base_seed = SEED;
    cfg.parallelism = 1;
    let start = Instant::now();
    let s = run_experiment(&cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let (ks, mean, var) = normality(&s);
    let desk = desk_normality_ok(ks, mean, var) && elapsed < 30.0;
    report(
        "1 (desk)",
        desk,
        format!(
            "Model 1 N=500 n=2000: KS={ks:.4} (<0.08) mean={mean:.4} (|.|<=0.15) var={var:.4} ([0.7,1.3]) runtime={elapsed:.2}s (<30s, 1 worker), excluded={}",
            s.excluded_paths
        ),
    );

    let mut paper = preset("model1-paper").unwrap();
    paper.base_seed = SEED;
    let s = run_experiment(&paper).unwrap();
    let (pks, pmean, pvar) = normality(&s);
    let paper_ok = pks < 0.04;
    report(
        "1 (paper)",
        paper_ok,
        format!("Model 1 N=5000 n=6000: KS={pks:.4} (<0.04) mean={pmean:.4} var={pvar:.4}"),
    );
    assert!(desk && paper_ok);
}

#[test]
fn c02_model2_leverage_normalized_bias() {
    let mut cfg = preset("model2-desk").unwrap();
    cfg.base_seed = SEED;
    let s = run_experiment(&cfg).unwrap();
    let (ks, mean, var) = normality(&s);
    let ok = desk_normality_ok(ks, mean, var);
    report(
        "2",
        ok,
        format!(
            "Model 2 (rho=-0.7) N=500 n=2000: KS={ks:.4} (<0.08) mean={mean:.4} var={var:.4}"
        ),
    );
    assert!(ok);
}

#[test]
fn c03_variance_gamma_consistency() {
    let coarse = run_experiment(&cfg_with("model3-desk", 2000, 500)).unwrap();
    let fine = run_experiment(&cfg_with("model3-desk", 6000, 500)).unwrap();
    let b = match ModelConfig::model3() {
        ModelConfig::Model3 { gamma_var, .. } => gamma_var,
        _ => unreachable!(),
    };
    let spec = ThresholdSpec::power_law(0.99);
    let bound = small_jump_bias_bound(b, &spec, 1.0 / 6000.0, 1.0);
    let tol = bound + 3.0 * fine.iv_error.mean_error_se;
    let dev_fine = fine.iv_error.mean_iv_threshold - 0.09;
    let dev_coarse = coarse.iv_error.mean_iv_threshold - 0.09;
    let within = dev_fine.abs() <= tol;
    let shrinks = dev_fine.abs() < dev_coarse.abs();
    report(
        "3",
        within && shrinks,
        format!(
            "Model 3 mean IV_hat n=6000: {:.5} (|dev|={:.2e} <= {:.2e} = bound {:.2e} + 3 SE); n=2000 |dev|={:.2e} > n=6000 |dev|",
            fine.iv_error.mean_iv_threshold,
            dev_fine.abs(),
            tol,
            bound,
            dev_coarse.abs()
        ),
    );
    assert!(within && shrinks);
}

#[test]
fn c04_consistency_sweep() {
    let mut errs = Vec::new();
    let mut fine = None;
    for n in [500, 2000, 6000] {
        let s = run_experiment(&cfg_with("model1-desk", n, 500)).unwrap();
        errs.push(s.iv_error.mean_abs_error);
        fine = Some(s);
    }
    let fine = fine.unwrap();
    let decreasing = errs[0] > errs[1] && errs[1] > errs[2];
    let h = 1.0 / 6000.0;
    let inside = fine
        .records
        .iter()
        .filter(|r| (r.iv_threshold - r.true_iv).abs() <= 3.0 * (2.0 * h * r.true_iq).sqrt())
        .count() as f64
        / fine.records.len() as f64;
    let ok = decreasing && inside >= 0.95;
    report(
        "4",
        ok,
        format!(
            "Model 1 mean |IV_hat - 0.09| at n=500/2000/6000: {:.2e} > {:.2e} > {:.2e}; n=6000 fraction within 3 sqrt(2h IQ) ({:.4}): {inside:.3} (>=0.95)",
            errs[0],
            errs[1],
            errs[2],
            3.0 * (2.0 * h * 0.0081f64).sqrt()
        ),
    );
    assert!(ok);
}

#[test]
fn c05_jump_detection() {
    let s = run_experiment(&cfg_with("model1-desk", 6000, 500)).unwrap();
    let d = s.detection.clone().unwrap();
    let recall = d.mean_recall.unwrap();
    let ok = recall >= 0.9 && d.mean_false_flags < 0.01;
    report(
        "5",
        ok,
        format!(
            "Model 1 n=6000 beta=0.9: mean per-path recall={recall:.4} (>=0.9), false flags per path={:.4} (<0.01), pooled precision={:.4}",
            d.mean_false_flags,
            d.pooled_precision.unwrap_or(f64::NAN)
        ),
    );
    assert!(ok);
}

#[test]
fn c06_efficiency_against_bipower() {
    let cfg = cfg_with("diffusion-desk", 2000, 500);
    let t = efficiency_comparison(&cfg).unwrap();
    let bpv_target = bipower_asymptotic_variance();
    let ratio_target = bpv_target / 2.0;
    let within = |x: f64, target: f64| (x - target).abs() <= 0.15 * target;
    let ok = within(t.threshold_variance, 2.0)
        && within(t.bipower_variance, bpv_target)
        && within(t.ratio, ratio_target);
    report(
        "6",
        ok,
        format!(
            "threshold var={:.4} (2 +-15%), bipower var={:.4} ({bpv_target:.4} +-15%), ratio={:.4} ({ratio_target:.4} +-15%)",
            t.threshold_variance, t.bipower_variance, t.ratio
        ),
    );
    assert!(ok);
}

#[test]
fn c07_jump_size_clt() {
    let cfg = cfg_with("model1-desk", 2000, 500);
    let out = jump_size_clt_experiment(&cfg).unwrap();
    let ok = out.ks_statistic < 0.09;
    report(
        "7",
        ok,
        format!(
            "jump-size statistic N=500 n=2000: KS vs Poisson-mixed Gaussian={:.4} (<0.09), sample var={:.4} (limit {:.4})",
            out.ks_statistic, out.sample_variance, out.limit_variance
        ),
    );
    assert!(ok);
}

#[test]
fn c08_threshold_admissibility() {
    let mut sweep_ok = true;
    for beta in [-0.5, 0.0, 0.1, 0.5, 0.9, 0.99, 1.0, 1.5, 2.0] {
        for c in [-1.0, 0.0, 1e-3, 1.0, 10.0] {
            let spec = ThresholdSpec::power_law(beta).with_scale(c);
            let expected = beta > 0.0 && beta < 1.0 && c > 0.0;
            sweep_ok &= threshold_admissible(&spec).admissible == expected;
        }
    }
    let mut admissible = cfg_with("model1-desk", 500, 500);
    admissible.threshold = ThresholdSpec::power_law(0.9);
    let mut critical = admissible.clone();
    critical.threshold = ThresholdSpec::power_law(1.0);
    let good = run_experiment(&admissible).unwrap().iv_error.mean_iv_threshold;
    let bad = run_experiment(&critical).unwrap().iv_error.mean_iv_threshold;
    let leak = bad > good && bad > 0.09;
    report(
        "8",
        sweep_ok && leak,
        format!(
            "admissible exactly on 0<beta<1, c>0: {sweep_ok}; n=500 mean IV_hat beta=1: {bad:.5} > beta=0.9: {good:.5}"
        ),
    );
    assert!(sweep_ok && leak);
}

// Direct-summation oracles, written independently of the library.
fn oracle_rv(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 1..x.len() {
        s += (x[i] - x[i - 1]).powi(2);
    }
    s
}

fn oracle_trv(x: &[f64], r: f64) -> f64 {
    let mut s = 0.0;
    for i in 1..x.len() {
        let d = x[i] - x[i - 1];
        if d * d <= r {
            s += d * d;
        }
    }
    s
}

fn oracle_iq(x: &[f64], r: f64, h: f64) -> f64 {
    let mut s = 0.0;
    for i in 1..x.len() {
        let d = x[i] - x[i - 1];
        if d * d <= r {
            s += d.powi(4);
        }
    }
    s / (3.0 * h)
}

fn oracle_bpv(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 2..x.len() {
        s += (x[i] - x[i - 1]).abs() * (x[i - 1] - x[i - 2]).abs();
    }
    std::f64::consts::PI / 2.0 * s
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

#[test]
fn c09_oracle_equivalence() {
    let mut runner = TestRunner::new(PropConfig {
        cases: 1000,
        ..PropConfig::default()
    });
    let strategy = (
        prop::collection::vec(-1.0f64..1.0, 2..=10),
        0.05f64..1.0,
        0.1f64..0.99,
    );
    let float_result = runner.run(&strategy, |(incs, horizon, beta)| {
        let path = SamplePath::from_increments(&incs, horizon).unwrap();
        let x = &path.observations;
        let spec = ThresholdSpec::power_law(beta);
        let h = horizon / incs.len() as f64;
        let r = spec.evaluate(h);
        prop_assert!(close(realized_variance(&path).unwrap(), oracle_rv(x)));
        prop_assert!(close(threshold_realized_variance(&path, &spec).unwrap(), oracle_trv(x, r)));
        prop_assert!(close(threshold_quarticity(&path, &spec).unwrap(), oracle_iq(x, r, h)));
        prop_assert!(close(bipower_variation(&path).unwrap(), oracle_bpv(x)));
        Ok(())
    });

    // Dyadic increments k/1024 make every square and partial sum exact, so
    // the complementarity identity must hold bit for bit.
    let dyadic = (prop::collection::vec(-1000i32..1000, 2..=10), 0.0f64..0.5);
    let mut runner = TestRunner::new(PropConfig {
        cases: 1000,
        ..PropConfig::default()
    });
    let exact_result = runner.run(&dyadic, |(ks, r)| {
        let incs: Vec<f64> = ks.iter().map(|&k| k as f64 / 1024.0).collect();
        let path = SamplePath::from_increments(&incs, 1.0).unwrap();
        let spec = ThresholdSpec::power_law(0.0).with_scale(r.max(1e-9));
        let det = detect_jumps(&path, &spec, None);
        let flagged: f64 = det.estimated_sizes.iter().map(|j| j.size * j.size).sum();
        let rv = realized_variance(&path).unwrap();
        let iv = threshold_realized_variance(&path, &spec).unwrap();
        prop_assert_eq!(rv, iv + flagged);
        Ok(())
    });
    let ok = float_result.is_ok() && exact_result.is_ok();
    report(
        "9",
        ok,
        format!(
            "1000 random paths n<=10 vs direct sums (1e-12 rel): {:?}; complementarity exact on 1000 dyadic paths: {:?}",
            float_result.as_ref().map(|_| "ok"),
            exact_result.as_ref().map(|_| "ok")
        ),
    );
    float_result.unwrap();
    exact_result.unwrap();
}

#[test]
fn c10_determinism_across_parallelism() {
    let mut outputs = Vec::new();
    for p in [1, 4, 8] {
        let mut cfg = cfg_with("model2-desk", 1000, 200);
        cfg.parallelism = p;
        let s = run_experiment(&cfg).unwrap();
        outputs.push((to_json(&s).unwrap(), histogram_csv(&s.histogram)));
    }
    let ok = outputs.windows(2).all(|w| w[0] == w[1]);
    report(
        "10",
        ok,
        format!("summary.json and hist.csv byte-identical across parallelism 1/4/8: {ok}"),
    );
    assert!(ok);
}
