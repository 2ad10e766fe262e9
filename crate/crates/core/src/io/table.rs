//! CSV and JSON emission.
//!
//! CSV files carry a header row, `.` decimal points and LF line endings.
//! Floats are written with 17 significant digits so reading them back is
//! exact. JSON keys follow struct field order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{JumpsiftError, Result};
use crate::estimators::{JumpDetectionResult, ThresholdSpec};
use crate::mc::{bipower_asymptotic_variance, EfficiencyTable, Histogram, THRESHOLD_ASYMPTOTIC_VARIANCE};
use crate::sim::{JumpEvent, JumpSource, SamplePath, TimeGrid};

/// `{:.16e}`: 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| JumpsiftError::io(dir, e))?;
        }
    }
    fs::write(path, contents).map_err(|e| JumpsiftError::io(path, e))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| JumpsiftError::Numeric(format!("json encoding: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, &to_json(value)?)
}

/// Path CSV: `time,x` plus, when ground truth is present, `x_continuous`
/// and `spot_variance` (variance at the start of the interval beginning at
/// `time`; empty on the last row).
pub fn path_csv(path: &SamplePath) -> String {
    let mut out = String::new();
    let truth = path.ground_truth.as_ref();
    if truth.is_some() {
        out.push_str("time,x,x_continuous,spot_variance\n");
    } else {
        out.push_str("time,x\n");
    }
    let n = path.n();
    for (i, (&t, &x)) in path.grid.times().iter().zip(&path.observations).enumerate() {
        let _ = write!(out, "{},{}", fmt_float(t), fmt_float(x));
        if let Some(g) = truth {
            let spot = if i < n {
                fmt_float(g.spot_variance.values[i * g.spot_variance.substeps])
            } else {
                String::new()
            };
            let _ = write!(out, ",{},{}", fmt_float(g.continuous_part[i]), spot);
        }
        out.push('\n');
    }
    out
}

pub fn write_path(file: &Path, path: &SamplePath) -> Result<()> {
    write_file(file, &path_csv(path))
}

pub fn jumps_csv(jumps: &[JumpEvent]) -> String {
    let mut out = String::from("time,size,source\n");
    for e in jumps {
        let _ = writeln!(out, "{},{},{}", fmt_float(e.time), fmt_float(e.size), e.source.as_str());
    }
    out
}

pub fn write_jumps(file: &Path, jumps: &[JumpEvent]) -> Result<()> {
    write_file(file, &jumps_csv(jumps))
}

fn read_rows(file: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(file).map_err(|e| JumpsiftError::io(file, e))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| JumpsiftError::Format {
        path: file.to_path_buf(),
        message: "empty file".into(),
    })?;
    let header: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let rows = lines
        .map(|l| l.split(',').map(|s| s.trim().to_string()).collect())
        .collect();
    Ok((header, rows))
}

fn column(file: &Path, header: &[String], name: &str) -> Result<usize> {
    header.iter().position(|h| h == name).ok_or_else(|| JumpsiftError::Format {
        path: file.to_path_buf(),
        message: format!("missing column `{name}`"),
    })
}

fn parse_cell(file: &Path, row: &[String], col: usize, line: usize) -> Result<f64> {
    let cell = row.get(col).ok_or_else(|| JumpsiftError::Format {
        path: file.to_path_buf(),
        message: format!("row {line} is too short"),
    })?;
    cell.parse().map_err(|_| JumpsiftError::Format {
        path: file.to_path_buf(),
        message: format!("row {line}: `{cell}` is not a number"),
    })
}

/// Reads `time` and `x` columns. Other columns are ignored and the
/// returned path carries no ground truth.
pub fn read_path(file: &Path) -> Result<SamplePath> {
    let (header, rows) = read_rows(file)?;
    let tc = column(file, &header, "time")?;
    let xc = column(file, &header, "x")?;
    let mut times = Vec::with_capacity(rows.len());
    let mut xs = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        times.push(parse_cell(file, row, tc, k + 2)?);
        xs.push(parse_cell(file, row, xc, k + 2)?);
    }
    let grid = TimeGrid::from_times(times).map_err(|e| JumpsiftError::Format {
        path: file.to_path_buf(),
        message: e.to_string(),
    })?;
    SamplePath::new(grid, xs).map_err(|e| JumpsiftError::Format {
        path: file.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn read_jumps(file: &Path) -> Result<Vec<JumpEvent>> {
    let (header, rows) = read_rows(file)?;
    let tc = column(file, &header, "time")?;
    let sc = column(file, &header, "size")?;
    let kc = column(file, &header, "source")?;
    rows.iter()
        .enumerate()
        .map(|(k, row)| {
            let source = match row.get(kc).map(String::as_str) {
                Some("finite_activity") => JumpSource::FiniteActivity,
                Some("ia_large") => JumpSource::IaLarge,
                Some("ia_small_aggregate") => JumpSource::IaSmallAggregate,
                other => {
                    return Err(JumpsiftError::Format {
                        path: file.to_path_buf(),
                        message: format!("row {}: unknown jump source {other:?}", k + 2),
                    })
                }
            };
            Ok(JumpEvent {
                time: parse_cell(file, row, tc, k + 2)?,
                size: parse_cell(file, row, sc, k + 2)?,
                source,
            })
        })
        .collect()
}

/// One row per interval:
/// `interval,t_start,t_end,increment,threshold,flagged,gamma_hat`.
pub fn detection_csv(path: &SamplePath, spec: &ThresholdSpec, det: &JumpDetectionResult) -> String {
    let mut out = String::from("interval,t_start,t_end,increment,threshold,flagged,gamma_hat\n");
    let times = path.grid.times();
    for (k, (d, &flag)) in path.increments().iter().zip(&det.indicators).enumerate() {
        let i = k + 1;
        let gamma = if flag { *d } else { 0.0 };
        let _ = writeln!(
            out,
            "{i},{},{},{},{},{},{}",
            fmt_float(times[k]),
            fmt_float(times[i]),
            fmt_float(*d),
            fmt_float(spec.for_interval(path, i)),
            u8::from(flag),
            fmt_float(gamma)
        );
    }
    out
}

/// `bin_left,bin_right,count`.
pub fn histogram_csv(hist: &Histogram) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for (l, r, c) in hist.bins() {
        let _ = writeln!(out, "{},{},{c}", fmt_float(l), fmt_float(r));
    }
    out
}

/// `estimator,empirical_variance,asymptotic_variance,empirical_mean`.
pub fn efficiency_csv(table: &EfficiencyTable) -> String {
    let bpv = bipower_asymptotic_variance();
    let mut out = String::from("estimator,empirical_variance,asymptotic_variance,empirical_mean\n");
    let _ = writeln!(
        out,
        "threshold,{},{},{}",
        fmt_float(table.threshold_variance),
        fmt_float(THRESHOLD_ASYMPTOTIC_VARIANCE),
        fmt_float(table.threshold_mean)
    );
    let _ = writeln!(
        out,
        "bipower,{},{},{}",
        fmt_float(table.bipower_variance),
        fmt_float(bpv),
        fmt_float(table.bipower_mean)
    );
    let _ = writeln!(
        out,
        "ratio,{},{},",
        fmt_float(table.ratio),
        fmt_float(bpv / THRESHOLD_ASYMPTOTIC_VARIANCE)
    );
    out
}

pub fn write_text(file: &Path, contents: &str) -> Result<()> {
    write_file(file, contents)
}
