#ifndef CRSPHERE_H
#define CRSPHERE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define CRS_LOCALIZATION_FULL 0

#define CRS_LOCALIZATION_CONE 1

#define CRS_LOCALIZATION_EDGE 2

#define CRS_LOCALIZATION_DIAG 3

#define CRS_LOCALIZATION_PLUS 4

#define CRS_LOCALIZATION_MINUS 5

typedef enum CrsStatus {
  CRS_STATUS_OK = 0,
  CRS_STATUS_INVALID_ARGUMENT = 1,
  CRS_STATUS_OVERFLOW = 2,
  CRS_STATUS_UNRESOLVED = 3,
  CRS_STATUS_IO = 4,
  CRS_STATUS_PARSE = 5,
  CRS_STATUS_NULL_POINTER = 6,
  CRS_STATUS_PANIC = 7,
} CrsStatus;

/**
 * Opaque coefficient set `u = Σ c Z_{ℓ,ℓ′}`.
 */
typedef struct CrsCoefficients CrsCoefficients;

/**
 * Opaque sampled kernel.
 */
typedef struct CrsKernelScan CrsKernelScan;

typedef struct CrsEigenData {
  uint64_t lambda;
  uint64_t mu;
  /**
   * Dimension of the bidegree space; exact below 2^53.
   */
  double dim;
  uint64_t big_n;
  uint32_t beta;
} CrsEigenData;

typedef struct CrsNorms {
  double l2;
  double w_r;
  double h_s;
  double mixed;
} CrsNorms;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL terminated,
 * truncated to `len`) and returns the buffer size needed for all of it.
 * Returns 0 when there is no error.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t crs_last_error_message(char *buf, size_t len);

void crs_clear_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *crs_version(void);

/**
 * Surface measure of S^{2n+1}.
 *
 * # Safety
 * `area` must be null or a valid pointer.
 */
enum CrsStatus crs_surface_area(uint32_t n, double *area);

/**
 * # Safety
 * `data` must be null or a valid pointer.
 */
enum CrsStatus crs_eigen_data(uint32_t ell, uint32_t ellp, uint32_t n, struct CrsEigenData *data);

/**
 * `P_degree^{(alpha,beta)}(x)`.
 *
 * # Safety
 * `value` must be null or a valid pointer.
 */
enum CrsStatus crs_jacobi_p(uint32_t degree, double alpha, double beta, double x, double *value);

/**
 * `J_nu(x)`.
 *
 * # Safety
 * `value` must be null or a valid pointer.
 */
enum CrsStatus crs_bessel_j(uint32_t nu, double x, double *value);

/**
 * `Z_{ℓ,ℓ′}` at the disk point `(omega, theta)`.
 *
 * # Safety
 * `re` and `im` must be null or valid pointers.
 */
enum CrsStatus crs_zonal_eval(uint32_t ell,
                              uint32_t ellp,
                              uint32_t n,
                              double omega,
                              double theta,
                              double *re,
                              double *im);

/**
 * Empty coefficient set on S^{2n+1}; null when `n == 0`.
 */
struct CrsCoefficients *crs_coefficients_new(uint32_t n);

/**
 * Reads an `ell,ellp,re,im` CSV file.
 *
 * # Safety
 * `path` must be null or a NUL-terminated string; `result` must be null or valid.
 */
enum CrsStatus crs_coefficients_read_csv(const char *path,
                                         uint32_t n,
                                         struct CrsCoefficients **result);

/**
 * Adds `re + i im` to the coefficient of bidegree `(ell, ellp)`.
 *
 * # Safety
 * `coeffs` must be null or a live handle.
 */
enum CrsStatus crs_coefficients_add(struct CrsCoefficients *coeffs,
                                    uint32_t ell,
                                    uint32_t ellp,
                                    double re,
                                    double im);

/**
 * Number of stored bidegrees, 0 for a null handle.
 *
 * # Safety
 * `coeffs` must be null or a live handle.
 */
size_t crs_coefficients_len(const struct CrsCoefficients *coeffs);

/**
 * # Safety
 * `coeffs` must be null or a handle not yet freed.
 */
void crs_coefficients_free(struct CrsCoefficients *coeffs);

/**
 * L², W^r, H^s and mixed norms with cone aperture `m`.
 *
 * # Safety
 * `coeffs` must be null or a live handle; `norms` null or valid.
 */
enum CrsStatus crs_norms(const struct CrsCoefficients *coeffs,
                         double r,
                         double s,
                         double m,
                         struct CrsNorms *norms);

/**
 * Samples `K_h(t)` on an `n_theta × n_omega` grid over the whole disk chart,
 * with default cutoffs.
 *
 * # Safety
 * `result` must be null or a valid pointer.
 */
enum CrsStatus crs_kernel_scan(double t,
                               double h,
                               uint32_t n,
                               uint32_t localization_code,
                               size_t n_theta,
                               size_t n_omega,
                               struct CrsKernelScan **result);

/**
 * Supremum of |K| over the scan and where it is attained.
 *
 * # Safety
 * `scan` must be null or a live handle; the out-pointers null or valid.
 */
enum CrsStatus crs_kernel_scan_sup(const struct CrsKernelScan *scan,
                                   double *sup,
                                   double *argmax_omega,
                                   double *argmax_theta);

/**
 * Grid dimensions and the number of spectral terms in the kernel.
 *
 * # Safety
 * `scan` must be null or a live handle; the out-pointers null or valid.
 */
enum CrsStatus crs_kernel_scan_shape(const struct CrsKernelScan *scan,
                                     size_t *n_theta,
                                     size_t *n_omega,
                                     size_t *term_count);

/**
 * Copies the samples, θ-major, into `re` and `im`, each of length `len`,
 * which must equal `n_theta * n_omega`.
 *
 * # Safety
 * `scan` must be null or a live handle; `re` and `im` null or valid for `len` doubles.
 */
enum CrsStatus crs_kernel_scan_values(const struct CrsKernelScan *scan,
                                      double *re,
                                      double *im,
                                      size_t len);

/**
 * # Safety
 * `scan` must be null or a handle not yet freed.
 */
void crs_kernel_scan_free(struct CrsKernelScan *scan);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRSPHERE_H */
