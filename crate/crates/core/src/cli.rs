//! `jumpsift` command line.
//!
//! Exit status: 0 on success, 2 on usage or configuration errors, 3 on
//! runtime failures.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{JumpsiftError, Result};
use crate::estimators::{detect_jumps, estimate, ThresholdSpec};
use crate::io::{self, RunManifest};
use crate::mc::{efficiency_comparison, jump_size_clt_experiment, run_experiment, ExperimentConfig};
use crate::sim::true_integrated_variance;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "jumpsift", version, about = "Threshold realized variance and jump detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one path and write it as CSV with its ground truth.
    Simulate(ConfigArgs),
    /// Estimate integrated variance and related quantities on a stored path.
    Estimate(EstimateArgs),
    /// Flag jump intervals on a stored path.
    Detect(DetectArgs),
    /// Run a Monte Carlo experiment on the normalized bias.
    Mc(McArgs),
    /// Compare threshold and bipower efficiency on jump-free paths.
    Compare(ConfigArgs),
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Built-in experiment preset.
    #[arg(long)]
    preset: Option<String>,
    /// TOML experiment configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Replay the configuration recorded in a run manifest.
    #[arg(long, conflicts_with_all = ["preset", "config"])]
    manifest: Option<PathBuf>,
    #[arg(long, env = "JUMPSIFT_SEED")]
    seed: Option<u64>,
    /// Number of observation intervals.
    #[arg(long)]
    n: Option<usize>,
    /// Number of simulated paths.
    #[arg(long)]
    paths: Option<usize>,
    /// Threshold exponent in r(h) = c h^beta.
    #[arg(long)]
    beta: Option<f64>,
    /// Threshold scale c in r(h) = c h^beta.
    #[arg(long = "scale-c")]
    scale_c: Option<f64>,
    #[arg(long)]
    substeps: Option<usize>,
    #[arg(long)]
    jitter: Option<f64>,
    #[arg(long)]
    parallelism: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[arg(long, default_value_t = 0.9)]
    beta: f64,
    #[arg(long = "scale-c", default_value_t = 1.0)]
    scale_c: f64,
}

impl ThresholdArgs {
    fn spec(&self) -> Result<ThresholdSpec> {
        if !(self.scale_c > 0.0) || !self.beta.is_finite() {
            return Err(JumpsiftError::config(
                "beta/scale-c",
                "scale must be positive and beta finite",
            ));
        }
        Ok(ThresholdSpec::power_law(self.beta).with_scale(self.scale_c))
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Path CSV with `time` and `x` columns.
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    threshold: ThresholdArgs,
    /// True integrated variance, enables the normalized bias.
    #[arg(long = "true-iv")]
    true_iv: Option<f64>,
    /// Output directory; the report goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    threshold: ThresholdArgs,
    /// Jump CSV written by `simulate`, used to score the flags.
    #[arg(long)]
    jumps: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct McArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Also run the jump-size error experiment (constant-volatility
    /// compound Poisson models).
    #[arg(long = "jump-clt")]
    jump_clt: bool,
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                EXIT_CONFIG
            } else {
                EXIT_RUNTIME
            }
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Simulate(args) => {
            let cfg = resolve(&args, "model1-desk")?;
            cmd_simulate(&cfg, &args.out)
        }
        Command::Estimate(args) => cmd_estimate(&args),
        Command::Detect(args) => cmd_detect(&args),
        Command::Mc(args) => {
            let cfg = resolve(&args.config, "model1-desk")?;
            cmd_mc(&cfg, &args.config.out, args.jump_clt)
        }
        Command::Compare(args) => {
            let cfg = resolve(&args, "diffusion-desk")?;
            cmd_compare(&cfg, &args.out)
        }
    }
}

/// Manifest, config file or preset, then command-line overrides.
fn resolve(args: &ConfigArgs, default_preset: &str) -> Result<ExperimentConfig> {
    let as_config = |e: JumpsiftError| match e {
        JumpsiftError::Io { path, source } => {
            JumpsiftError::config(path.display().to_string(), source.to_string())
        }
        other => other,
    };
    let mut cfg = if let Some(m) = &args.manifest {
        RunManifest::read(m).map_err(as_config)?.experiment()?
    } else if let Some(c) = &args.config {
        io::parse_config_file(c).map_err(as_config)?
    } else {
        io::preset(args.preset.as_deref().unwrap_or(default_preset))?
    };
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    if let Some(n) = args.n {
        cfg.grid.n = n;
    }
    if let Some(p) = args.paths {
        cfg.n_paths = p;
    }
    if let Some(b) = args.beta {
        cfg.threshold.exponent = b;
    }
    if let Some(c) = args.scale_c {
        cfg.threshold.scale = c;
    }
    if let Some(m) = args.substeps {
        cfg.substeps = m;
    }
    if let Some(j) = args.jitter {
        cfg.grid.jitter = j;
    }
    if let Some(p) = args.parallelism {
        cfg.parallelism = p;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_manifest(out: &Path, subcommand: &str, cfg: &ExperimentConfig, outputs: &[&str]) -> Result<()> {
    let manifest = RunManifest::new(
        subcommand,
        cfg,
        outputs.iter().map(|s| s.to_string()).collect(),
    );
    io::write_json(&out.join("manifest.json"), &manifest)
}

#[derive(Serialize)]
struct TruthSummary {
    seed: u64,
    true_iv: f64,
    true_iq: f64,
    jump_events: usize,
}

fn cmd_simulate(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let grid = cfg.build_grid()?;
    let path = cfg.simulate_path(&grid, 0)?;
    let truth = path.truth()?;
    io::write_path(&out.join("path.csv"), &path)?;
    io::write_jumps(&out.join("jumps.csv"), &truth.jumps)?;
    io::write_json(
        &out.join("truth.json"),
        &TruthSummary {
            seed: cfg.base_seed,
            true_iv: true_integrated_variance(&path, 2)?,
            true_iq: true_integrated_variance(&path, 4)?,
            jump_events: truth.jumps.len(),
        },
    )?;
    write_manifest(out, "simulate", cfg, &["path.csv", "jumps.csv", "truth.json"])
}

fn cmd_estimate(args: &EstimateArgs) -> Result<()> {
    let spec = args.threshold.spec()?;
    let path = io::read_path(&args.input)?;
    let report = estimate(&path, &spec, args.true_iv)?;
    if !report.admissibility.admissible {
        eprintln!("warning: {}", report.admissibility.reason);
    }
    match &args.out {
        Some(dir) => io::write_json(&dir.join("report.json"), &report),
        None => {
            print!("{}", io::to_json(&report)?);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct DetectionReport<'a> {
    n: usize,
    flagged: usize,
    threshold_used: ThresholdSpec,
    admissibility_warning: bool,
    #[serde(flatten)]
    result: &'a crate::estimators::JumpDetectionResult,
}

fn cmd_detect(args: &DetectArgs) -> Result<()> {
    let spec = args.threshold.spec()?;
    let path = io::read_path(&args.input)?;
    let truth = args.jumps.as_deref().map(io::read_jumps).transpose()?;
    let det = detect_jumps(&path, &spec, truth.as_deref());
    if !det.admissibility.admissible {
        eprintln!("warning: {}", det.admissibility.reason);
    }
    io::write_text(&args.out.join("detect.csv"), &io::detection_csv(&path, &spec, &det))?;
    io::write_json(
        &args.out.join("detect.json"),
        &DetectionReport {
            n: path.n(),
            flagged: det.flagged_count(),
            threshold_used: spec,
            admissibility_warning: !det.admissibility.admissible,
            result: &det,
        },
    )
}

fn cmd_mc(cfg: &ExperimentConfig, out: &Path, jump_clt: bool) -> Result<()> {
    let summary = run_experiment(cfg)?;
    io::write_json(&out.join("summary.json"), &summary)?;
    io::write_text(&out.join("hist.csv"), &io::histogram_csv(&summary.histogram))?;
    let mut outputs = vec!["summary.json", "hist.csv"];
    if jump_clt {
        let clt = jump_size_clt_experiment(cfg)?;
        io::write_json(&out.join("jump_clt.json"), &clt)?;
        outputs.push("jump_clt.json");
    }
    write_manifest(out, "mc", cfg, &outputs)
}

fn cmd_compare(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let table = efficiency_comparison(cfg)?;
    io::write_text(&out.join("efficiency.csv"), &io::efficiency_csv(&table))?;
    write_manifest(out, "compare", cfg, &["efficiency.csv"])
}
