#ifndef YBHOM_H
#define YBHOM_H

/* Generated by cbindgen from ybhom-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>
typedef struct YbhOperator YbhOperator;

/**
 * Result of a C-interface call.
 */
typedef enum YbhStatus {
  YBH_STATUS_OK = 0,
  /**
   * A pointer was null or an argument was out of range.
   */
  YBH_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The computation itself reported an error.
   */
  YBH_STATUS_FAILED = 2,
  /**
   * The boundary maps do not compose to zero, so homology is undefined.
   */
  YBH_STATUS_BROKEN_CHAIN = 3,
  /**
   * An internal panic was caught at the boundary.
   */
  YBH_STATUS_PANIC = 4,
} YbhStatus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *ybh_last_error_message(void);

/**
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum YbhStatus ybh_operator_homflypt(uintptr_t m, YbhOperator **out);

/**
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum YbhStatus ybh_operator_homflypt_inverse(uintptr_t m, YbhOperator **out);

/**
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum YbhStatus ybh_operator_jones(uintptr_t m, YbhOperator **out);

/**
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum YbhStatus ybh_operator_identity(uintptr_t m, YbhOperator **out);

/**
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum YbhStatus ybh_operator_kauffman(YbhOperator **out);

/**
 * Releases a handle. Null is a no-op.
 *
 * # Safety
 * `op` must have come from one of the constructors and not be freed twice.
 */
void ybh_operator_free(YbhOperator *op);

/**
 * Releases a string returned through an `out` parameter. Null is a no-op.
 *
 * # Safety
 * `s` must have come from this library and not be freed twice.
 */
void ybh_string_free(char *s);

/**
 * Checks the Yang-Baxter equation on all basis triples; writes the verdict
 * to `holds`.
 *
 * # Safety
 * `op` must be a live handle and `holds` a valid pointer.
 */
enum YbhStatus ybh_verify_ybe(const YbhOperator *op, bool *holds);

/**
 * Checks that `a` and `b` compose to the identity in both orders.
 *
 * # Safety
 * `a` and `b` must be live handles and `holds` a valid pointer.
 */
enum YbhStatus ybh_verify_inverse(const YbhOperator *a, const YbhOperator *b, bool *holds);

/**
 * Writes whether every column of the operator sums to 1.
 *
 * # Safety
 * `op` must be a live handle and `unital` a valid pointer.
 */
enum YbhStatus ybh_column_unital(const YbhOperator *op, bool *unital);

/**
 * Returns the operator's matrix as `;`-separated rows of textual
 * polynomials (one row per line).
 *
 * # Safety
 * `op` must be a live handle and `out` a valid pointer to a string slot.
 */
enum YbhStatus ybh_operator_matrix_text(const YbhOperator *op, char **out);

/**
 * Computes `H_n` of the operator's complex and returns the report as a
 * JSON string. `ring_tag` is `"qy"` or `"laurent"` (null means `"qy"`),
 * `expect_tag` one of `none`, `thm`, `table`, `conj-pw`, `conj-h3` (null
 * means `none`), and `cache_dir` an optional boundary cache directory.
 *
 * # Safety
 * `op` must be a live handle, `label` a valid C string, `out` a valid
 * pointer to a string slot; the optional strings must be null or valid.
 */
enum YbhStatus ybh_homology_json(const YbhOperator *op,
                                 const char *label,
                                 uintptr_t n,
                                 const char *ring_tag,
                                 const char *expect_tag,
                                 const char *cache_dir,
                                 char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* YBHOM_H */
