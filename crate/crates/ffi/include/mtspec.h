#ifndef MTSPEC_H
#define MTSPEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Band flag bit: center within the boundary margin.
#define MTS_FLAG_BOUNDARY 1

// Band flag bit: taper construction failed, power is NaN.
#define MTS_FLAG_FAILED 2

typedef enum MtsMethod {
  MTS_METHOD_MTNUFFT = 0,
  MTS_METHOD_MTNUFFT0 = 1,
  MTS_METHOD_BG_FIXED = 2,
  MTS_METHOD_BG_ADAPTIVE = 3,
  MTS_METHOD_BASELINE = 4,
} MtsMethod;

typedef enum MtsStatus {
  MTS_STATUS_OK = 0,
  MTS_STATUS_NULL_POINTER = 1,
  MTS_STATUS_INVALID_INPUT = 2,
  MTS_STATUS_NOT_INCREASING = 3,
  MTS_STATUS_NON_FINITE = 4,
  MTS_STATUS_CONDITIONING = 5,
  MTS_STATUS_SPECTRAL_RANGE = 6,
  MTS_STATUS_EXTRAPOLATION = 7,
  MTS_STATUS_PLAN_MISMATCH = 8,
  MTS_STATUS_DEGENERATE_TAPERS = 9,
  MTS_STATUS_NO_CONVERGENCE = 10,
  MTS_STATUS_GENERATION = 11,
  MTS_STATUS_PANIC = 12,
} MtsStatus;

// A sampled series.
typedef struct MtsSeries MtsSeries;

// A power-spectrum estimate.
typedef struct MtsSpectrum MtsSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated, truncated to `len`).
// Returns the full message length excluding the terminator, or 0 if there is none.
//
// # Safety
// `buf` must be valid for `len` bytes or null.
size_t mts_last_error(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *mts_version(void);

// Builds a series from `n` strictly increasing times and their values.
//
// # Safety
// `times` and `values` must point to `n` doubles; `out` must be writable.
enum MtsStatus mts_series_new(const double *times,
                              const double *values,
                              size_t n,
                              struct MtsSeries **out);

// # Safety
// `series` must come from [`mts_series_new`] and not be used afterwards. Null is ignored.
void mts_series_free(struct MtsSeries *series);

// Estimates power at bands of half-width `f_w` spaced `spacing` apart over `[0, f_max]`.
// `k_tapers` and `epsilon` are ignored by methods that do not use them; the adaptive method starts
// from its default schedule at `f_w`.
//
// # Safety
// `series` must be a live handle; `out` must be writable.
enum MtsStatus mts_estimate(const struct MtsSeries *series,
                            enum MtsMethod method,
                            double f_max,
                            double f_w,
                            double spacing,
                            size_t k_tapers,
                            double epsilon,
                            struct MtsSpectrum **out);

// # Safety
// `spectrum` must come from [`mts_estimate`] and not be used afterwards. Null is ignored.
void mts_spectrum_free(struct MtsSpectrum *spectrum);

// Number of bands, or 0 for a null handle.
//
// # Safety
// `spectrum` must be a live handle or null.
size_t mts_spectrum_len(const struct MtsSpectrum *spectrum);

// Copies band centers into `dst`, which must hold at least [`mts_spectrum_len`] entries.
//
// # Safety
// `dst` must be valid for `len` doubles.
enum MtsStatus mts_spectrum_centers(const struct MtsSpectrum *spectrum, double *dst, size_t len);

// Copies band powers into `dst`. Failed bands are NaN.
//
// # Safety
// `dst` must be valid for `len` doubles.
enum MtsStatus mts_spectrum_power(const struct MtsSpectrum *spectrum, double *dst, size_t len);

// Copies the half-width actually used per band.
//
// # Safety
// `dst` must be valid for `len` doubles.
enum MtsStatus mts_spectrum_f_w_used(const struct MtsSpectrum *spectrum, double *dst, size_t len);

// Copies the taper count actually used per band.
//
// # Safety
// `dst` must be valid for `len` entries.
enum MtsStatus mts_spectrum_k_used(const struct MtsSpectrum *spectrum, size_t *dst, size_t len);

// Copies per-band flag bits (`MTS_FLAG_BOUNDARY`, `MTS_FLAG_FAILED`).
//
// # Safety
// `dst` must be valid for `len` bytes.
enum MtsStatus mts_spectrum_flags(const struct MtsSpectrum *spectrum, uint8_t *dst, size_t len);

// Upper-tail quantile of the F(d1, d2) distribution: the `x` with `P(F > x) = p`.
//
// # Safety
// `out` must be writable.
enum MtsStatus mts_f_quantile(double p, size_t d1, size_t d2, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MTSPEC_H */
