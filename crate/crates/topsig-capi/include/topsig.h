#ifndef TOPSIG_H
#define TOPSIG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a C-API call.
 */
typedef enum TopsigStatus {
  TopsigStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  TopsigStatus_NullPointer = 1,
  /**
   * A parameter violated its documented range or invariant.
   */
  TopsigStatus_InvalidInput = 2,
  /**
   * A JSON or CSV document could not be parsed.
   */
  TopsigStatus_ParseError = 3,
  /**
   * A numerical procedure failed beyond its tolerances.
   */
  TopsigStatus_NumericError = 4,
  /**
   * Filesystem failure.
   */
  TopsigStatus_IoError = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  TopsigStatus_Panic = 6,
} TopsigStatus;

/**
 * A signature curve on an evaluation grid.
 */
typedef struct TopsigCurve TopsigCurve;

/**
 * A sublevel-set persistence diagram.
 */
typedef struct TopsigDiagram TopsigDiagram;

/**
 * A signature estimate with confidence bands.
 */
typedef struct TopsigEstimate TopsigEstimate;

/**
 * A sampled signal.
 */
typedef struct TopsigSeries TopsigSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the calling thread's most recent error. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *topsig_last_error_message(void);

/**
 * Builds a series from `len` samples spaced `dt` seconds apart.
 *
 * # Safety
 * `values` must point to `len` readable doubles and `out` must be a
 * valid destination pointer.
 */
enum TopsigStatus topsig_series_new(const double *values,
                                    uintptr_t len,
                                    double dt,
                                    struct TopsigSeries **out);

/**
 * Runs a simulation described by a JSON document (same schema as the
 * CLI `simulate --config` file).
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` a valid
 * destination pointer.
 */
enum TopsigStatus topsig_simulate_json(const char *config_json, struct TopsigSeries **out);

/**
 * Number of samples.
 *
 * # Safety
 * `series` must be a live handle from this library.
 */
uintptr_t topsig_series_len(const struct TopsigSeries *series);

/**
 * Sample spacing in seconds (0.0 for a null handle).
 *
 * # Safety
 * `series` must be a live handle from this library.
 */
double topsig_series_dt(const struct TopsigSeries *series);

/**
 * Copies the samples into `buffer`, which must hold `topsig_series_len`
 * doubles.
 *
 * # Safety
 * `series` must be live and `buffer` large enough.
 */
enum TopsigStatus topsig_series_copy_values(const struct TopsigSeries *series, double *buffer);

/**
 * # Safety
 * `series` must come from this library and not be freed twice.
 */
void topsig_series_free(struct TopsigSeries *series);

/**
 * Sublevel-set persistence diagram of the series.
 *
 * # Safety
 * `series` must be live and `out` a valid destination pointer.
 */
enum TopsigStatus topsig_diagram_compute(const struct TopsigSeries *series,
                                         struct TopsigDiagram **out);

/**
 * Number of points in the diagram.
 *
 * # Safety
 * `diagram` must be a live handle from this library.
 */
uintptr_t topsig_diagram_len(const struct TopsigDiagram *diagram);

/**
 * Copies (birth, death) pairs into `buffer`, which must hold
 * `2 * topsig_diagram_len` doubles, ordered lexicographically.
 *
 * # Safety
 * `diagram` must be live and `buffer` large enough.
 */
enum TopsigStatus topsig_diagram_copy_points(const struct TopsigDiagram *diagram, double *buffer);

/**
 * # Safety
 * `diagram` must come from this library and not be freed twice.
 */
void topsig_diagram_free(struct TopsigDiagram *diagram);

/**
 * Exact bottleneck distance between two diagrams.
 *
 * # Safety
 * Both handles must be live and `out` a valid destination pointer.
 */
enum TopsigStatus topsig_bottleneck_distance(const struct TopsigDiagram *d1,
                                             const struct TopsigDiagram *d2,
                                             double *out);

/**
 * Windowed empirical signature of `series` under a JSON signature
 * config (fields: window_len, stride, truncation, kernel, grid?).
 *
 * # Safety
 * `series` must be live, `config_json` NUL-terminated, `out` valid.
 */
enum TopsigStatus topsig_signature_json(const struct TopsigSeries *series,
                                        const char *config_json,
                                        struct TopsigCurve **out);

/**
 * Number of grid nodes in the curve.
 *
 * # Safety
 * `curve` must be a live handle from this library.
 */
uintptr_t topsig_curve_len(const struct TopsigCurve *curve);

/**
 * Copies the node values into `buffer` (`topsig_curve_len` doubles,
 * row-major for two-dimensional grids).
 *
 * # Safety
 * `curve` must be live and `buffer` large enough.
 */
enum TopsigStatus topsig_curve_copy_values(const struct TopsigCurve *curve, double *buffer);

/**
 * Serializes the curve as the CLI's `{grid, values}` JSON document.
 * Free the returned string with `topsig_string_free`.
 *
 * # Safety
 * `curve` must be live and `out` a valid destination pointer.
 */
enum TopsigStatus topsig_curve_to_json(const struct TopsigCurve *curve, char **out);

/**
 * # Safety
 * `curve` must come from this library and not be freed twice.
 */
void topsig_curve_free(struct TopsigCurve *curve);

/**
 * Signature estimate with bootstrap bands under a JSON config (the
 * signature fields plus replicates, block_len?, alpha, band, seed).
 *
 * # Safety
 * `series` must be live, `config_json` NUL-terminated, `out` valid.
 */
enum TopsigStatus topsig_bootstrap_json(const struct TopsigSeries *series,
                                        const char *config_json,
                                        struct TopsigEstimate **out);

/**
 * Number of grid nodes in the estimate.
 *
 * # Safety
 * `estimate` must be a live handle from this library.
 */
uintptr_t topsig_estimate_len(const struct TopsigEstimate *estimate);

/**
 * Copies the mean and band curves; each buffer must hold
 * `topsig_estimate_len` doubles. Null buffers are skipped.
 *
 * # Safety
 * `estimate` must be live; non-null buffers must be large enough.
 */
enum TopsigStatus topsig_estimate_copy_bands(const struct TopsigEstimate *estimate,
                                             double *mean,
                                             double *lower,
                                             double *upper);

/**
 * Serializes the estimate as JSON. Free with `topsig_string_free`.
 *
 * # Safety
 * `estimate` must be live and `out` a valid destination pointer.
 */
enum TopsigStatus topsig_estimate_to_json(const struct TopsigEstimate *estimate, char **out);

/**
 * # Safety
 * `estimate` must come from this library and not be freed twice.
 */
void topsig_estimate_free(struct TopsigEstimate *estimate);

/**
 * Frees a string returned by the `_to_json` functions.
 *
 * # Safety
 * `text` must come from this library and not be freed twice.
 */
void topsig_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOPSIG_H */
