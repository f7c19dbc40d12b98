#ifndef KLORENTZ_H
#define KLORENTZ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KlStatus {
  /**
   * Success, CertifiedYes or Unknown.
   */
  KL_STATUS_OK = 0,
  /**
   * The certificate is CertifiedNo; the witness is in the JSON output.
   */
  KL_STATUS_CERTIFIED_NO = 1,
  /**
   * Null pointer, bad UTF-8 or a length that does not match.
   */
  KL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Malformed JSON or values rejected by the library.
   */
  KL_STATUS_INVALID_INPUT = 3,
  /**
   * An operation precondition failed (dimensions, degree, properness).
   */
  KL_STATUS_PRECONDITION = 4,
  /**
   * Singular matrix or failed projection.
   */
  KL_STATUS_NUMERICAL = 5,
  /**
   * Internal panic caught at the boundary.
   */
  KL_STATUS_PANIC = 6,
} KlStatus;

typedef struct KlCone KlCone;

typedef struct KlPolynomial KlPolynomial;

typedef struct KlSystem KlSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *kl_version(void);

/**
 * Message of the last error on this thread, or null. Owned by the library.
 */
const char *kl_last_error(void);

/**
 * Releases a string returned through an `out` parameter.
 *
 * # Safety
 * `s` must be null or a string produced by this library, freed once.
 */
void kl_string_free(char *s);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum KlStatus kl_polynomial_from_json(const char *json, struct KlPolynomial **out);

/**
 * # Safety
 * `p` must be null or a handle from `kl_polynomial_from_json`, freed once.
 */
void kl_polynomial_free(struct KlPolynomial *p);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t kl_polynomial_nvars(const struct KlPolynomial *p);

/**
 * # Safety
 * `x` must point to `n` doubles and `out` must be writable.
 */
enum KlStatus kl_polynomial_eval(const struct KlPolynomial *p,
                                 const double *x,
                                 size_t n,
                                 double *out);

/**
 * Canonical polynomial JSON.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum KlStatus kl_polynomial_to_json(const struct KlPolynomial *p, char **out);

/**
 * Ultra log-concavity of a bivariate form.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum KlStatus kl_certify_ulc(const struct KlPolynomial *p, bool *out);

/**
 * Hyperbolicity with respect to `dir_json` (a JSON array of rationals).
 * The certificate JSON is written to `out`.
 *
 * # Safety
 * `p` must be a live handle, `dir_json` NUL-terminated and `out` writable.
 */
enum KlStatus kl_certify_hyperbolic(const struct KlPolynomial *p,
                                    const char *dir_json,
                                    uint64_t samples,
                                    uint64_t seed,
                                    char **out);

/**
 * K-Lorentzian check; the certificate JSON is written to `out`.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum KlStatus kl_certify_lorentzian(const struct KlPolynomial *p,
                                    const struct KlCone *cone,
                                    uint64_t samples,
                                    uint64_t seed,
                                    char **out);

/**
 * # Safety
 * `json` must be NUL-terminated and `out` writable.
 */
enum KlStatus kl_cone_from_json(const char *json, struct KlCone **out);

/**
 * The nonnegative orthant of dimension `n`, or null when `n` is 0.
 */
struct KlCone *kl_cone_orthant(size_t n);

/**
 * # Safety
 * `k` must be null or a cone handle, freed once.
 */
void kl_cone_free(struct KlCone *k);

/**
 * # Safety
 * `k` must be null or a live handle.
 */
size_t kl_cone_nvars(const struct KlCone *k);

/**
 * Tolerance membership of `x`.
 *
 * # Safety
 * `x` must point to `n` doubles and `out` must be writable.
 */
enum KlStatus kl_cone_contains(const struct KlCone *k,
                               const double *x,
                               size_t n,
                               double tol,
                               bool *out);

/**
 * Euclidean projection of `z` (length `n`) into `out` (length `n`).
 *
 * # Safety
 * `z` and `out` must point to `n` doubles.
 */
enum KlStatus kl_cone_project(const struct KlCone *k, const double *z, size_t n, double *out);

/**
 * LEVI system from `{"A": {"rows": …}, "F": [poly…]?, "cone": {…}}`.
 *
 * # Safety
 * `json` must be NUL-terminated and `out` writable.
 */
enum KlStatus kl_system_from_json(const char *json, struct KlSystem **out);

/**
 * # Safety
 * `s` must be null or a system handle, freed once.
 */
void kl_system_free(struct KlSystem *s);

/**
 * One projected Euler step from `x` into `out` (both length `n`).
 *
 * # Safety
 * `x` and `out` must point to `n` doubles.
 */
enum KlStatus kl_levi_step(const struct KlSystem *s,
                           const double *x,
                           size_t n,
                           double h,
                           double *out);

/**
 * Trajectory CSV `t,x1,…,xn` from `x0` with step `h` up to time `t_end`.
 *
 * # Safety
 * `x0` must point to `n` doubles and `out` must be writable.
 */
enum KlStatus kl_levi_simulate(const struct KlSystem *s,
                               const double *x0,
                               size_t n,
                               double h,
                               double t_end,
                               char **out);

/**
 * Copositivity of the symmetric part of the system matrix on its cone;
 * the certificate JSON is written to `out`.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum KlStatus kl_levi_copositivity(const struct KlSystem *s,
                                   uint64_t samples,
                                   uint64_t seed,
                                   char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KLORENTZ_H */
