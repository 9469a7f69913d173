#ifndef SPINFORGE_H
#define SPINFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfStatus {
  SF_OK = 0,
  SF_NULL_POINTER = 1,
  SF_INVALID_UTF8 = 2,
  SF_PARSE_ERROR = 3,
  SF_INVALID_DIMENSION = 4,
  SF_NOT_IN_GROUP = 5,
  SF_BOUND_EXHAUSTED = 6,
  SF_PRECONDITION = 7,
  SF_INTERNAL = 8,
} SfStatus;

/**
 * Opaque multivector handle.
 */
typedef struct SfMultiVector SfMultiVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *sf_version(void);

/**
 * Message of the last failure on this thread; valid until the next call.
 */
const char *sf_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sf_string_free(char *s);

/**
 * Parses text such as `"1 + e1 f2"` in the Clifford algebra of dimension `m`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum SfStatus sf_multivector_parse(size_t m, const char *text, struct SfMultiVector **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must come from this library and not be freed twice.
 */
void sf_multivector_free(struct SfMultiVector *h);

/**
 * Ambient dimension, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t sf_multivector_dim(const struct SfMultiVector *h);

/**
 * Clifford product `a * b` as a new handle.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum SfStatus sf_multivector_mul(const struct SfMultiVector *a,
                                 const struct SfMultiVector *b,
                                 struct SfMultiVector **out);

/**
 * Canonical text form; free with [`sf_string_free`].
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum SfStatus sf_multivector_to_text(const struct SfMultiVector *h, char **out);

/**
 * Image in `SO_m` of a `GSpin_m` element as a JSON matrix of strings.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum SfStatus sf_multivector_project(const struct SfMultiVector *h, char **out);

/**
 * Parity classification of `m` as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_parity(size_t m, char **out);

/**
 * Prime tower of length `n` below `bound` as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_prime_tower(size_t n, uint64_t bound, char **out);

/**
 * Full search pipeline for `m`; the certificate is written as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_prop26(size_t m, uint64_t bound, char **out);

/**
 * Re-verifies a certificate produced by [`sf_prop26`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `ok` writable.
 */
enum SfStatus sf_verify_certificate(const char *json, bool *ok);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINFORGE_H */
