#ifndef HEEGNER_H
#define HEEGNER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HeegnerStatus {
  HEEGNER_STATUS_OK = 0,
  HEEGNER_STATUS_NULL_POINTER = 1,
  HEEGNER_STATUS_INVALID_UTF8 = 2,
  HEEGNER_STATUS_PARSE = 3,
  HEEGNER_STATUS_INPUT = 4,
  HEEGNER_STATUS_UNAVAILABLE = 5,
  HEEGNER_STATUS_PANIC = 6,
} HeegnerStatus;

typedef enum HeegnerVerdict {
  HEEGNER_VERDICT_EXISTS = 0,
  HEEGNER_VERDICT_NO_EMBEDDING = 1,
  HEEGNER_VERDICT_UNDETERMINED = 3,
} HeegnerVerdict;

/**
 * Result of one analysis.
 */
typedef struct HeegnerReport HeegnerReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library from the same thread.
 */
const char *heegner_last_error(void);

/**
 * Static version string.
 */
const char *heegner_version(void);

/**
 * Runs an analyze request given as JSON.
 *
 * # Safety
 * `request_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HeegnerStatus heegner_analyze_json(const char *request_json, struct HeegnerReport **out);

/**
 * # Safety
 * `report` must come from `heegner_analyze_json` and not be used afterwards.
 */
void heegner_report_free(struct HeegnerReport *report);

/**
 * # Safety
 * `report` must be a live handle or NULL.
 */
enum HeegnerStatus heegner_report_verdict(const struct HeegnerReport *report,
                                          enum HeegnerVerdict *out);

/**
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum HeegnerStatus heegner_report_c_prime(const struct HeegnerReport *report, uint64_t *out);

/**
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum HeegnerStatus heegner_report_level(const struct HeegnerReport *report, uint64_t *out);

/**
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum HeegnerStatus heegner_report_heegner_count(const struct HeegnerReport *report, uint64_t *out);

/**
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum HeegnerStatus heegner_report_delta(const struct HeegnerReport *report, uint64_t *out);

/**
 * Full output as JSON; borrowed from the handle.
 *
 * # Safety
 * `report` must be a live handle or NULL.
 */
const char *heegner_report_json(const struct HeegnerReport *report);

/**
 * Copy of the full output as JSON; release with `heegner_string_free`.
 *
 * # Safety
 * `report` must be a live handle or NULL.
 */
char *heegner_report_json_copy(const struct HeegnerReport *report);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void heegner_string_free(char *s);

/**
 * Local table lookup; `case` is a `HeegnerCase` value. `k_class` is
 * required except for Cartan, `l_class` only for Division. `exists`
 * receives 1 or 0.
 *
 * # Safety
 * String arguments must be NUL-terminated or NULL where optional; `exists`
 * must be valid.
 */
enum HeegnerStatus heegner_embed(int case_,
                                 uint64_t p,
                                 uint32_t m,
                                 uint32_t n,
                                 const char *k_class,
                                 const char *l_class,
                                 int *exists);

/**
 * h(R_c) for the order of conductor c in the field of discriminant disc.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HeegnerStatus heegner_class_number(int64_t disc, uint64_t c, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEEGNER_H */
