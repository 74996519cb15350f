#ifndef KLM_H
#define KLM_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KlmStatus {
  KLM_STATUS_OK = 0,
  KLM_STATUS_INVALID_ARGUMENT = 1,
  KLM_STATUS_INTEGRITY = 2,
  KLM_STATUS_NULL_POINTER = 3,
  KLM_STATUS_OUT_OF_RANGE = 4,
  KLM_STATUS_PANIC = 5,
} KlmStatus;

/**
 * Opaque certificate.
 */
typedef struct KlmCertificate KlmCertificate;

/**
 * Opaque polynomial with exact rational coefficients.
 */
typedef struct KlmPoly KlmPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Kazhdan-Lusztig polynomial of `U_{m,d}`.
 *
 * # Safety
 * `out` must be valid for a write; free the result with [`klm_poly_free`].
 */
enum KlmStatus klm_kl_poly(int64_t m, int64_t d, struct KlmPoly **out);

/**
 * Z-polynomial of `U_{m,d}`.
 *
 * # Safety
 * As for [`klm_kl_poly`].
 */
enum KlmStatus klm_z_poly(int64_t m, int64_t d, struct KlmPoly **out);

/**
 * Characteristic polynomial of `U_{m,d}` from its lattice of flats.
 *
 * # Safety
 * As for [`klm_kl_poly`].
 */
enum KlmStatus klm_char_poly(int64_t m, int64_t d, struct KlmPoly **out);

/**
 * Degree, or -1 for the zero polynomial.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for a write.
 */
enum KlmStatus klm_poly_degree(const struct KlmPoly *p, int64_t *out);

/**
 * Coefficient of `t^k` as a decimal or `p/q` string; free with [`klm_string_free`].
 *
 * # Safety
 * `p` must be a live handle and `out` valid for a write.
 */
enum KlmStatus klm_poly_coeff(const struct KlmPoly *p, size_t k, char **out);

/**
 * Canonical ascending rendering in `t`; free with [`klm_string_free`].
 *
 * # Safety
 * `p` must be a live handle and `out` valid for a write.
 */
enum KlmStatus klm_poly_render(const struct KlmPoly *p, char **out);

/**
 * # Safety
 * `p` must be null or a handle not yet freed.
 */
void klm_poly_free(struct KlmPoly *p);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void klm_string_free(char *s);

/**
 * Certifies that every zero of `p` is real and negative.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for a write; free the result with
 * [`klm_certificate_free`].
 */
enum KlmStatus klm_certify_negative_zeros(const struct KlmPoly *p, struct KlmCertificate **out);

/**
 * 1 for a passing certificate, 0 for failing, -1 for null.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
int32_t klm_certificate_passed(const struct KlmCertificate *c);

/**
 * # Safety
 * `c` must be a live handle and `out` valid for a write.
 */
enum KlmStatus klm_certificate_json(const struct KlmCertificate *c, char **out);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void klm_certificate_free(struct KlmCertificate *c);

/**
 * Message for the last failing call on this thread (empty after a success). The pointer
 * stays valid until the next call into this library from the same thread.
 */
const char *klm_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KLM_H */
