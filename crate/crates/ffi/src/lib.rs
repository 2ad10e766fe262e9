//! C ABI over `jumpsift`.
//!
//! Every entry point returns a [`JsStatus`]. On failure the message is kept
//! per thread and read back with [`js_last_error`]. Paths and Monte Carlo
//! summaries are opaque handles released with their `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jumpsift::estimators::{detect_jumps, estimate, ThresholdSpec};
use jumpsift::io::preset;
use jumpsift::mc::{run_experiment, GridSpec, McSummary};
use jumpsift::sim::{true_integrated_variance, SamplePath, TimeGrid};
use jumpsift::JumpsiftError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    Numeric = 4,
    Degenerate = 5,
    Config = 6,
    Io = 7,
    Panic = 8,
}

/// Observed path, optionally with simulation ground truth.
pub struct JsPath(SamplePath);

/// Monte Carlo summary.
pub struct JsSummary(McSummary);

/// Threshold `r(h) = scale * h^exponent`, applied per interval.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct JsThreshold {
    pub exponent: f64,
    pub scale: f64,
}

/// Scalar part of an estimation report. Optional values are NaN when absent.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct JsEstimate {
    pub n: usize,
    pub iv_threshold: f64,
    pub iq_threshold: f64,
    pub realized_variance: f64,
    pub bipower_variation: f64,
    pub normalized_bias: f64,
    pub flagged: usize,
    pub admissible: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &JumpsiftError) -> JsStatus {
    match err {
        JumpsiftError::InvalidArgument(_) => JsStatus::InvalidArgument,
        JumpsiftError::Unsupported(_) => JsStatus::Unsupported,
        JumpsiftError::Numeric(_) => JsStatus::Numeric,
        JumpsiftError::DegenerateStatistic(_) => JsStatus::Degenerate,
        JumpsiftError::Config { .. } => JsStatus::Config,
        JumpsiftError::Io { .. } | JumpsiftError::Format { .. } => JsStatus::Io,
    }
}

struct Fail(JsStatus, String);

impl From<JumpsiftError> for Fail {
    fn from(e: JumpsiftError) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Fail {
    Fail(JsStatus::NullPointer, format!("`{name}` is null"))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(JsStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> JsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => JsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            JsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, name: &str) -> Result<&'a mut [T], Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn string<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("`{name}` is not valid UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, name: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn spec_of(t: JsThreshold) -> Result<ThresholdSpec, Fail> {
    if !(t.exponent.is_finite() && t.scale.is_finite()) {
        return Err(invalid("threshold exponent and scale must be finite"));
    }
    Ok(ThresholdSpec::power_law(t.exponent).with_scale(t.scale))
}

/// Message of the last failed call on this thread, or NULL after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn js_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn js_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a path from `len` observations at strictly increasing `times`
/// starting at 0. When `times` is NULL the grid is uniform on
/// `[0, horizon]`; otherwise `horizon` is ignored.
///
/// # Safety
/// `x` (and `times` when non-NULL) must point to `len` doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn js_path_from_observations(
    times: *const f64,
    x: *const f64,
    len: usize,
    horizon: f64,
    out: *mut *mut JsPath,
) -> JsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let xs = slice(x, len, "x")?.to_vec();
        if len < 2 {
            return Err(invalid("need at least two observations"));
        }
        let grid = if times.is_null() {
            TimeGrid::uniform(len - 1, horizon)?
        } else {
            TimeGrid::from_times(slice(times, len, "times")?.to_vec())?
        };
        let path = SamplePath::new(grid, xs)?;
        put(out, Box::into_raw(Box::new(JsPath(path))), "out")
    })
}

/// Simulates path 0 of a named preset on `n` intervals (0 keeps the
/// preset's grid) with the given base seed.
///
/// # Safety
/// `preset_name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn js_path_simulate_preset(
    preset_name: *const c_char,
    n: usize,
    seed: u64,
    out: *mut *mut JsPath,
) -> JsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut cfg = preset(string(preset_name, "preset_name")?)?;
        if n > 0 {
            cfg.grid = GridSpec { n, ..cfg.grid };
        }
        cfg.base_seed = seed;
        cfg.validate()?;
        let grid = cfg.build_grid()?;
        let path = cfg.simulate_path(&grid, 0)?;
        put(out, Box::into_raw(Box::new(JsPath(path))), "out")
    })
}

/// Number of observations (`n + 1`).
///
/// # Safety
/// `path` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn js_path_len(path: *const JsPath, out: *mut usize) -> JsStatus {
    guard(|| {
        let p = deref(path, "path")?;
        put(out, p.0.observations.len(), "out")
    })
}

/// Copies the observations into `buf`, which must hold exactly
/// `js_path_len` values.
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn js_path_copy_observations(
    path: *const JsPath,
    buf: *mut f64,
    len: usize,
) -> JsStatus {
    guard(|| {
        let p = deref(path, "path")?;
        let obs = &p.0.observations;
        if len != obs.len() {
            return Err(invalid(format!("buffer holds {len}, path has {}", obs.len())));
        }
        slice_mut(buf, len, "buf")?.copy_from_slice(obs);
        Ok(())
    })
}

/// Integrated variance of a simulated path. `JS_STATUS_UNSUPPORTED` for
/// paths built from observations.
///
/// # Safety
/// `path` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn js_path_true_iv(path: *const JsPath, out: *mut f64) -> JsStatus {
    guard(|| {
        let p = deref(path, "path")?;
        put(out, true_integrated_variance(&p.0, 2)?, "out")
    })
}

/// # Safety
/// `path` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn js_path_free(path: *mut JsPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Threshold estimators on one path. Pass NaN as `true_iv` when unknown.
///
/// # Safety
/// `path` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn js_estimate(
    path: *const JsPath,
    threshold: JsThreshold,
    true_iv: f64,
    out: *mut JsEstimate,
) -> JsStatus {
    guard(|| {
        let p = deref(path, "path")?;
        let truth = (!true_iv.is_nan()).then_some(true_iv);
        let r = estimate(&p.0, &spec_of(threshold)?, truth)?;
        let value = JsEstimate {
            n: r.n,
            iv_threshold: r.iv_threshold,
            iq_threshold: r.iq_threshold.unwrap_or(f64::NAN),
            realized_variance: r.realized_variance,
            bipower_variation: r.bipower_variation.unwrap_or(f64::NAN),
            normalized_bias: r.normalized_bias.unwrap_or(f64::NAN),
            flagged: r.flagged_intervals.len(),
            admissible: r.admissibility.admissible,
        };
        put(out, value, "out")
    })
}

/// Flags intervals whose squared increment exceeds the threshold.
/// `flags[i]` and `sizes[i]` describe interval `i + 1`; `sizes` holds the
/// increment on flagged intervals and 0 elsewhere. Both buffers must hold
/// exactly `n` values. `flagged` (optional) receives the flag count.
///
/// # Safety
/// `flags` and `sizes` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn js_detect(
    path: *const JsPath,
    threshold: JsThreshold,
    flags: *mut u8,
    sizes: *mut f64,
    len: usize,
    flagged: *mut usize,
) -> JsStatus {
    guard(|| {
        let p = deref(path, "path")?;
        if len != p.0.n() {
            return Err(invalid(format!("buffers hold {len}, path has {} intervals", p.0.n())));
        }
        let spec = spec_of(threshold)?;
        let det = detect_jumps(&p.0, &spec, None);
        let flags = slice_mut(flags, len, "flags")?;
        let sizes = slice_mut(sizes, len, "sizes")?;
        for (f, &on) in flags.iter_mut().zip(&det.indicators) {
            *f = on as u8;
        }
        sizes.fill(0.0);
        for j in &det.estimated_sizes {
            sizes[j.interval - 1] = j.size;
        }
        if !flagged.is_null() {
            flagged.write(det.flagged_count());
        }
        Ok(())
    })
}

/// Runs the Monte Carlo experiment of a named preset. `n`, `n_paths` and
/// `parallelism` override the preset when non-zero.
///
/// # Safety
/// `preset_name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn js_mc_run_preset(
    preset_name: *const c_char,
    n: usize,
    n_paths: usize,
    seed: u64,
    parallelism: usize,
    out: *mut *mut JsSummary,
) -> JsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut cfg = preset(string(preset_name, "preset_name")?)?;
        if n > 0 {
            cfg.grid = GridSpec { n, ..cfg.grid };
        }
        if n_paths > 0 {
            cfg.n_paths = n_paths;
        }
        if parallelism > 0 {
            cfg.parallelism = parallelism;
        }
        cfg.base_seed = seed;
        let summary = run_experiment(&cfg)?;
        put(out, Box::into_raw(Box::new(JsSummary(summary))), "out")
    })
}

/// Paths simulated and paths whose normalized bias was undefined.
///
/// # Safety
/// `summary` must be a live handle or NULL; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn js_summary_counts(
    summary: *const JsSummary,
    n_paths: *mut usize,
    excluded: *mut usize,
) -> JsStatus {
    guard(|| {
        let s = deref(summary, "summary")?;
        put(n_paths, s.0.n_paths, "n_paths")?;
        put(excluded, s.0.excluded_paths, "excluded")
    })
}

/// Mean and variance of the normalized bias, and the KS distance to N(0,1).
/// `JS_STATUS_DEGENERATE` when fewer than two paths were usable.
///
/// # Safety
/// `summary` must be a live handle or NULL; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn js_summary_normality(
    summary: *const JsSummary,
    mean: *mut f64,
    variance: *mut f64,
    ks: *mut f64,
) -> JsStatus {
    guard(|| {
        let s = deref(summary, "summary")?;
        let (Some(m), Some(d)) = (s.0.moments, s.0.ks_statistic) else {
            return Err(Fail(
                JsStatus::Degenerate,
                "fewer than two defined normalized-bias samples".into(),
            ));
        };
        put(mean, m.mean, "mean")?;
        put(variance, m.variance, "variance")?;
        put(ks, d, "ks")
    })
}

/// Mean of the threshold estimate and mean absolute error against the true
/// integrated variance.
///
/// # Safety
/// `summary` must be a live handle or NULL; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn js_summary_iv_error(
    summary: *const JsSummary,
    mean_iv_threshold: *mut f64,
    mean_abs_error: *mut f64,
) -> JsStatus {
    guard(|| {
        let s = deref(summary, "summary")?;
        put(mean_iv_threshold, s.0.iv_error.mean_iv_threshold, "mean_iv_threshold")?;
        put(mean_abs_error, s.0.iv_error.mean_abs_error, "mean_abs_error")
    })
}

/// Copies the defined normalized-bias samples in path order. Call with
/// `buf` NULL to get the count in `written` first.
///
/// # Safety
/// `buf`, when non-NULL, must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn js_summary_samples(
    summary: *const JsSummary,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> JsStatus {
    guard(|| {
        let s = deref(summary, "summary")?;
        let samples = s.0.normalized_bias_samples();
        if !buf.is_null() {
            if len < samples.len() {
                return Err(invalid(format!("buffer holds {len}, need {}", samples.len())));
            }
            slice_mut(buf, samples.len(), "buf")?.copy_from_slice(&samples);
        }
        put(written, samples.len(), "written")
    })
}

/// # Safety
/// `summary` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn js_summary_free(summary: *mut JsSummary) {
    if !summary.is_null() {
        drop(Box::from_raw(summary));
    }
}
