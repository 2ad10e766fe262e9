#ifndef JUMPSIFT_H
#define JUMPSIFT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum JsStatus {
  JS_STATUS_OK = 0,
  JS_STATUS_NULL_POINTER = 1,
  JS_STATUS_INVALID_ARGUMENT = 2,
  JS_STATUS_UNSUPPORTED = 3,
  JS_STATUS_NUMERIC = 4,
  JS_STATUS_DEGENERATE = 5,
  JS_STATUS_CONFIG = 6,
  JS_STATUS_IO = 7,
  JS_STATUS_PANIC = 8,
} JsStatus;

// Observed path, optionally with simulation ground truth.
typedef struct JsPath JsPath;

// Monte Carlo summary.
typedef struct JsSummary JsSummary;

// Threshold `r(h) = scale * h^exponent`, applied per interval.
typedef struct JsThreshold {
  double exponent;
  double scale;
} JsThreshold;

// Scalar part of an estimation report. Optional values are NaN when absent.
typedef struct JsEstimate {
  size_t n;
  double iv_threshold;
  double iq_threshold;
  double realized_variance;
  double bipower_variation;
  double normalized_bias;
  size_t flagged;
  bool admissible;
} JsEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL after a
// successful call. Valid until the next call on the same thread.
const char *js_last_error(void);

// Library version as a static NUL-terminated string.
const char *js_version(void);

// Builds a path from `len` observations at strictly increasing `times`
// starting at 0. When `times` is NULL the grid is uniform on
// `[0, horizon]`; otherwise `horizon` is ignored.
//
// # Safety
// `x` (and `times` when non-NULL) must point to `len` doubles; `out` must be
// writable.
enum JsStatus js_path_from_observations(const double *times,
                                        const double *x,
                                        size_t len,
                                        double horizon,
                                        struct JsPath **out);

// Simulates path 0 of a named preset on `n` intervals (0 keeps the
// preset's grid) with the given base seed.
//
// # Safety
// `preset_name` must be a NUL-terminated string; `out` must be writable.
enum JsStatus js_path_simulate_preset(const char *preset_name,
                                      size_t n,
                                      uint64_t seed,
                                      struct JsPath **out);

// Number of observations (`n + 1`).
//
// # Safety
// `path` must be a live handle or NULL; `out` must be writable.
enum JsStatus js_path_len(const struct JsPath *path, size_t *out);

// Copies the observations into `buf`, which must hold exactly
// `js_path_len` values.
//
// # Safety
// `buf` must point to `len` writable doubles.
enum JsStatus js_path_copy_observations(const struct JsPath *path, double *buf, size_t len);

// Integrated variance of a simulated path. `JS_STATUS_UNSUPPORTED` for
// paths built from observations.
//
// # Safety
// `path` must be a live handle or NULL; `out` must be writable.
enum JsStatus js_path_true_iv(const struct JsPath *path, double *out);

// # Safety
// `path` must come from this library and not be used afterwards.
void js_path_free(struct JsPath *path);

// Threshold estimators on one path. Pass NaN as `true_iv` when unknown.
//
// # Safety
// `path` must be a live handle or NULL; `out` must be writable.
enum JsStatus js_estimate(const struct JsPath *path,
                          struct JsThreshold threshold,
                          double true_iv,
                          struct JsEstimate *out);

// Flags intervals whose squared increment exceeds the threshold.
// `flags[i]` and `sizes[i]` describe interval `i + 1`; `sizes` holds the
// increment on flagged intervals and 0 elsewhere. Both buffers must hold
// exactly `n` values. `flagged` (optional) receives the flag count.
//
// # Safety
// `flags` and `sizes` must point to `len` writable values.
enum JsStatus js_detect(const struct JsPath *path,
                        struct JsThreshold threshold,
                        uint8_t *flags,
                        double *sizes,
                        size_t len,
                        size_t *flagged);

// Runs the Monte Carlo experiment of a named preset. `n`, `n_paths` and
// `parallelism` override the preset when non-zero.
//
// # Safety
// `preset_name` must be a NUL-terminated string; `out` must be writable.
enum JsStatus js_mc_run_preset(const char *preset_name,
                               size_t n,
                               size_t n_paths,
                               uint64_t seed,
                               size_t parallelism,
                               struct JsSummary **out);

// Paths simulated and paths whose normalized bias was undefined.
//
// # Safety
// `summary` must be a live handle or NULL; outputs must be writable.
enum JsStatus js_summary_counts(const struct JsSummary *summary, size_t *n_paths, size_t *excluded);

// Mean and variance of the normalized bias, and the KS distance to N(0,1).
// `JS_STATUS_DEGENERATE` when fewer than two paths were usable.
//
// # Safety
// `summary` must be a live handle or NULL; outputs must be writable.
enum JsStatus js_summary_normality(const struct JsSummary *summary,
                                   double *mean,
                                   double *variance,
                                   double *ks);

// Mean of the threshold estimate and mean absolute error against the true
// integrated variance.
//
// # Safety
// `summary` must be a live handle or NULL; outputs must be writable.
enum JsStatus js_summary_iv_error(const struct JsSummary *summary,
                                  double *mean_iv_threshold,
                                  double *mean_abs_error);

// Copies the defined normalized-bias samples in path order. Call with
// `buf` NULL to get the count in `written` first.
//
// # Safety
// `buf`, when non-NULL, must point to `len` writable doubles.
enum JsStatus js_summary_samples(const struct JsSummary *summary,
                                 double *buf,
                                 size_t len,
                                 size_t *written);

// # Safety
// `summary` must come from this library and not be used afterwards.
void js_summary_free(struct JsSummary *summary);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JUMPSIFT_H */
