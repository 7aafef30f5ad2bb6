#ifndef ISODEG_H
#define ISODEG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IsodegGroup {
  ISODEG_GROUP_GL2 = 0,
  ISODEG_GROUP_BOREL = 1,
  ISODEG_GROUP_CNS = 2,
  ISODEG_GROUP_CNS_PLUS = 3,
  ISODEG_GROUP_CNS_POWER = 4,
  ISODEG_GROUP_CNS_PLUS_POWER = 5,
} IsodegGroup;

typedef enum IsodegSpace {
  ISODEG_SPACE_LINES = 0,
  ISODEG_SPACE_VECTORS = 1,
} IsodegSpace;

typedef enum IsodegStatus {
  ISODEG_STATUS_OK = 0,
  ISODEG_STATUS_NULL_POINTER = 1,
  ISODEG_STATUS_INVALID_INPUT = 2,
  /**
   * p lies in I_Q(1); no bound applies.
   */
  ISODEG_STATUS_DOMAIN_REFUSAL = 3,
  ISODEG_STATUS_CAP_EXCEEDED = 4,
  ISODEG_STATUS_INCONSISTENT = 5,
  ISODEG_STATUS_PANIC = 6,
} IsodegStatus;

/**
 * Opaque degree report for one prime.
 */
typedef struct IsodegDegreeReport IsodegDegreeReport;

/**
 * Opaque sorted set of primes.
 */
typedef struct IsodegPrimeSet IsodegPrimeSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Owned by the
 * library; valid until the next call.
 */
const char *isodeg_last_error(void);

const char *isodeg_version(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from an `isodeg_*` call and not have been freed.
 */
void isodeg_string_free(char *s);

/**
 * Degree report for `p`. `epsilon = 0` selects the smallest non-residue.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum IsodegStatus isodeg_degrees(uint64_t p, uint32_t epsilon, struct IsodegDegreeReport **out);

/**
 * # Safety
 * `report` must be null or a live handle from `isodeg_degrees`.
 */
void isodeg_degree_report_free(struct IsodegDegreeReport *report);

/**
 * `d_lower`, or 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
uint64_t isodeg_degree_report_d_lower(const struct IsodegDegreeReport *report);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
uint32_t isodeg_degree_report_epsilon(const struct IsodegDegreeReport *report);

/**
 * Number of allowed images in the report.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t isodeg_degree_report_image_count(const struct IsodegDegreeReport *report);

/**
 * Minimal line-orbit size for image `index`.
 *
 * # Safety
 * `report` must be a live handle; `out` must be valid for writes.
 */
enum IsodegStatus isodeg_degree_report_min_orbit(const struct IsodegDegreeReport *report,
                                                 size_t index,
                                                 uint64_t *out);

/**
 * The report as JSON. Free with `isodeg_string_free`.
 *
 * # Safety
 * `report` must be a live handle; `out` must be valid for writes.
 */
enum IsodegStatus isodeg_degree_report_json(const struct IsodegDegreeReport *report, char **out);

/**
 * `conditional = false` gives the unconditional upper bound for I_Q(d);
 * `true` gives I_Q(d) assuming Serre uniformity.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum IsodegStatus isodeg_iq(uint64_t d, bool conditional, struct IsodegPrimeSet **out);

/**
 * # Safety
 * `set` must be null or a live handle from `isodeg_iq`.
 */
void isodeg_prime_set_free(struct IsodegPrimeSet *set);

/**
 * # Safety
 * `set` must be null or a live handle.
 */
size_t isodeg_prime_set_len(const struct IsodegPrimeSet *set);

/**
 * The `index`-th prime in ascending order, or 0 when out of range.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
uint64_t isodeg_prime_set_get(const struct IsodegPrimeSet *set, size_t index);

/**
 * # Safety
 * `set` must be null or a live handle.
 */
bool isodeg_prime_set_contains(const struct IsodegPrimeSet *set, uint64_t p);

/**
 * # Safety
 * `set` must be a live handle; `out` must be valid for writes.
 */
enum IsodegStatus isodeg_prime_set_json(const struct IsodegPrimeSet *set, char **out);

/**
 * Smallest orbit of a catalog group on lines or nonzero vectors.
 * `exponent` is used only by the power groups; `epsilon = 0` selects the
 * smallest non-residue.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum IsodegStatus isodeg_min_orbit_size(uint64_t p,
                                        enum IsodegGroup group,
                                        uint32_t exponent,
                                        enum IsodegSpace space,
                                        uint32_t epsilon,
                                        uint64_t *out);

/**
 * Copies the last error message; for callers that prefer owned strings.
 * Returns null when there is none. Free with `isodeg_string_free`.
 */
char *isodeg_last_error_copy(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISODEG_H */
