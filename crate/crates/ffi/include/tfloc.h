#ifndef TFLOC_H
#define TFLOC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TflocStatus {
  TFLOC_STATUS_OK = 0,
  TFLOC_STATUS_INVALID_ARGUMENT = 1,
  TFLOC_STATUS_WRONG_REGIME = 2,
  TFLOC_STATUS_NON_CONVERGENCE = 3,
  TFLOC_STATUS_NULL_POINTER = 4,
  TFLOC_STATUS_PANIC = 5,
} TflocStatus;

typedef enum TflocRegime {
  TFLOC_REGIME_P_DOMINANT = 0,
  TFLOC_REGIME_Q_DOMINANT = 1,
  TFLOC_REGIME_INTERMEDIATE = 2,
  TFLOC_REGIME_DEGENERATE_EQUAL_EXPONENTS = 3,
} TflocRegime;

/**
 * Opaque solved problem.
 */
typedef struct TflocOptimum TflocOptimum;

typedef struct TflocParams {
  uint32_t d;
  double p;
  double q;
  double a;
  double b;
} TflocParams;

typedef struct TflocDecision {
  enum TflocRegime regime;
  double threshold_lower;
  double threshold_upper;
  double ratio;
} TflocDecision;

/**
 * Summary of a solved problem. Multiplier fields are NaN unless
 * `has_multipliers` is set; Gaussian fields are NaN unless it is clear.
 */
typedef struct TflocOptimumInfo {
  enum TflocRegime regime;
  double bound;
  bool has_multipliers;
  double lambda1;
  double lambda2;
  double c1;
  double c2;
  double t_end;
  double residual_p;
  double residual_q;
  uint64_t iterations;
  double amplitude;
  double decay;
} TflocOptimumInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length including the NUL, or
 * 0 when there is no error.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t tfloc_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tfloc_version(void);

/**
 * # Safety
 * `params` and `out` must be null or valid pointers.
 */
enum TflocStatus tfloc_classify(const struct TflocParams *params, struct TflocDecision *out);

/**
 * `G(s)` in dimension `d`.
 *
 * # Safety
 * `out` must be null or a valid pointer.
 */
enum TflocStatus tfloc_g_eval(double s, uint32_t d, double *out);

/**
 * # Safety
 * `out` must be null or a valid pointer.
 */
enum TflocStatus tfloc_u_eval(double t,
                              double lambda1,
                              double lambda2,
                              double p,
                              double q,
                              uint32_t d,
                              double *out);

/**
 * Solves `params` in whichever regime applies. On success `*out` owns a new
 * handle.
 *
 * # Safety
 * `params` and `out` must be null or valid pointers.
 */
enum TflocStatus tfloc_optimize(const struct TflocParams *params,
                                double tol,
                                struct TflocOptimum **out);

/**
 * # Safety
 * `handle` must be null or come from [`tfloc_optimize`] and not be freed twice.
 */
void tfloc_optimum_free(struct TflocOptimum *handle);

/**
 * # Safety
 * `handle` and `out` must be null or valid pointers.
 */
enum TflocStatus tfloc_optimum_info(const struct TflocOptimum *handle,
                                    struct TflocOptimumInfo *out);

/**
 * `ψ(v)` of an intermediate-regime solution.
 *
 * # Safety
 * `handle` and `out` must be null or valid pointers.
 */
enum TflocStatus tfloc_optimum_psi(const struct TflocOptimum *handle, double v, double *out);

/**
 * Writes `n` equispaced radii in `[0, r_max]` and the profile values there
 * into caller buffers of length `n`.
 *
 * # Safety
 * `handle` must be valid; `r_out` and `f_out` must be null or valid for `n` writes.
 */
enum TflocStatus tfloc_optimum_profile(const struct TflocOptimum *handle,
                                       double r_max,
                                       size_t n,
                                       double *r_out,
                                       double *f_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TFLOC_H */
