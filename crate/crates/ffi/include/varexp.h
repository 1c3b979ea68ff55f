#ifndef VAREXP_H
#define VAREXP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Exact summation, for the `method` argument of [`vx_hilbert`].
 */
#define VX_HILBERT_DIRECT 0

/**
 * Zero-padded FFT convolution.
 */
#define VX_HILBERT_FFT 1

typedef enum VxStatus {
  VX_STATUS_OK = 0,
  VX_STATUS_NULL_POINTER = 1,
  VX_STATUS_INVALID_ARGUMENT = 2,
  VX_STATUS_PARSE = 3,
  VX_STATUS_UNKNOWN_NAME = 4,
  /**
   * A norm was computed but its modular missed the tolerance.
   */
  VX_STATUS_TOLERANCE = 5,
  VX_STATUS_IO = 6,
  VX_STATUS_PANIC = 7,
} VxStatus;

/**
 * An exponent sequence.
 */
typedef struct VxExponent VxExponent;

/**
 * A real sequence on a finite window.
 */
typedef struct VxSequence VxSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failure on this thread, or null. Valid until the
 * next library call on the same thread.
 */
const char *vx_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void vx_string_free(char *s);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum VxStatus vx_exponent_constant(double q, struct VxExponent **out);

/**
 * `values[i]` is the exponent at index `window_start + i`; `tail` applies elsewhere.
 *
 * # Safety
 * `values` must point to `len` doubles (it may be null when `len` is 0) and
 * `out` must be valid.
 */
enum VxStatus vx_exponent_new(int64_t window_start,
                              const double *values,
                              size_t len,
                              double tail,
                              struct VxExponent **out);

/**
 * The exponent at index `n`.
 *
 * # Safety
 * `p` and `out` must be valid.
 */
enum VxStatus vx_exponent_get(const struct VxExponent *p, int64_t n, double *out);

/**
 * # Safety
 * `p` must come from this library and not have been freed.
 */
void vx_exponent_free(struct VxExponent *p);

/**
 * # Safety
 * `values` must point to `len` doubles (it may be null when `len` is 0) and
 * `out` must be valid.
 */
enum VxStatus vx_sequence_new(int64_t window_start,
                              const double *values,
                              size_t len,
                              struct VxSequence **out);

/**
 * Parses `{"window_start": ..., "values": [...]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` valid.
 */
enum VxStatus vx_sequence_from_json(const char *json, struct VxSequence **out);

/**
 * # Safety
 * `b` and `out` must be valid; free the string with [`vx_string_free`].
 */
enum VxStatus vx_sequence_to_json(const struct VxSequence *b, char **out);

/**
 * # Safety
 * `b`, `start` and `len` must be valid.
 */
enum VxStatus vx_sequence_window(const struct VxSequence *b, int64_t *start, size_t *len);

/**
 * Copies up to `cap` values into `out`; `written` receives the full length.
 *
 * # Safety
 * `b` and `written` must be valid and `out` must have room for `cap` doubles.
 */
enum VxStatus vx_sequence_values(const struct VxSequence *b,
                                 double *out,
                                 size_t cap,
                                 size_t *written);

/**
 * # Safety
 * `b` must come from this library and not have been freed.
 */
void vx_sequence_free(struct VxSequence *b);

/**
 * `sum_n |b_n|^{p_n}`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum VxStatus vx_modular(const struct VxSequence *b, const struct VxExponent *p, double *out);

/**
 * The Luxemburg norm. On `Tolerance` the value is still written.
 *
 * # Safety
 * All pointers must be valid.
 */
enum VxStatus vx_luxemburg_norm(const struct VxSequence *b,
                                const struct VxExponent *p,
                                double tol,
                                double *out);

/**
 * `(Hb)_n` for `n` in `[out_start, out_start + out_len)`.
 *
 * # Safety
 * `b` and `out` must be valid.
 */
enum VxStatus vx_hilbert(const struct VxSequence *b,
                         int64_t out_start,
                         size_t out_len,
                         uint32_t method,
                         struct VxSequence **out);

/**
 * `4 * 2^{-2/p} / (1 - 2^{-1/p})`, the bound on `sup_n |Hb_n|` for `||b|| <= 1`.
 *
 * # Safety
 * `out` must be valid.
 */
enum VxStatus vx_pointwise_bound(double p_bar, double *out);

/**
 * # Safety
 * `out` must be valid.
 */
enum VxStatus vx_conjugate(double p, double *out);

/**
 * Lower bound for the norm of `H` on `l^{p_n}` over the window
 * `[start, start + len)`. `witness` may be null; otherwise it receives the
 * maximizing sequence.
 *
 * # Safety
 * `p` and `lower_bound` must be valid; `witness` must be valid or null.
 */
enum VxStatus vx_estimate_norm(const struct VxExponent *p,
                               int64_t start,
                               size_t len,
                               size_t trials,
                               uint64_t seed,
                               double *lower_bound,
                               struct VxSequence **witness);

/**
 * Runs a check suite. `config_json` may be null for defaults. The report is
 * returned as JSON in `report`; `passed` is set to 1 or 0.
 *
 * # Safety
 * `name`, and `config_json` when non-null, must be nul-terminated strings;
 * `report` and `passed` must be valid.
 */
enum VxStatus vx_run_suite(const char *name, const char *config_json, char **report, int *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VAREXP_H */
