#ifndef FIBERCOMPLEX_H
#define FIBERCOMPLEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcStatus {
  FC_STATUS_OK = 0,
  FC_STATUS_NULL_POINTER = 1,
  FC_STATUS_INVALID_UTF8 = 2,
  FC_STATUS_PARSE = 3,
  FC_STATUS_INVALID_TRACE = 4,
  FC_STATUS_NOT_COCYCLE = 5,
  FC_STATUS_OUT_OF_RANGE = 6,
  FC_STATUS_INVALID_ARGUMENT = 7,
  FC_STATUS_INTERNAL = 8,
} FcStatus;

typedef enum FcVariant {
  FC_VARIANT_FULL = 0,
  FC_VARIANT_ADMISSIBLE = 1,
  FC_VARIANT_MORSE = 2,
} FcVariant;

/**
 * One of the universal complexes.
 */
typedef struct FcComplex FcComplex;

/**
 * A parsed Morse function trace.
 */
typedef struct FcTrace FcTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *fc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fc_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum FcStatus fc_complex_new(enum FcVariant variant, struct FcComplex **out);

/**
 * # Safety
 * `c` must come from [`fc_complex_new`] and not be freed twice. Null is ignored.
 */
void fc_complex_free(struct FcComplex *c);

/**
 * Dimension of the cochain group in `degree` (0, 1 or 2).
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum FcStatus fc_complex_dim(const struct FcComplex *c, uint32_t degree, size_t *out);

/**
 * Dimension of the cohomology group in `degree` (0, 1 or 2).
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum FcStatus fc_complex_betti(const struct FcComplex *c, uint32_t degree, size_t *out);

/**
 * `Ok` when the complex has consistent shapes and squares to zero.
 *
 * # Safety
 * `c` must be a live handle.
 */
enum FcStatus fc_complex_check(const struct FcComplex *c);

/**
 * Parses a trace in the text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum FcStatus fc_trace_parse(const char *text, struct FcTrace **out);

/**
 * # Safety
 * `t` must come from [`fc_trace_parse`] and not be freed twice. Null is ignored.
 */
void fc_trace_free(struct FcTrace *t);

/**
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum FcStatus fc_trace_event_count(const struct FcTrace *t, size_t *out);

/**
 * Writes the number of violated trace invariants (0 for a valid trace).
 * The full report is available through [`fc_last_error`] when nonzero.
 *
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum FcStatus fc_trace_validate(const struct FcTrace *t, size_t *out);

/**
 * Occurrences of a refined class (for example `bI^2_e`) in a valid trace.
 * An unrefined name counts both refinements.
 *
 * # Safety
 * `t` must be a live handle, `class_name` a NUL-terminated string and `out` writable.
 */
enum FcStatus fc_trace_count(const struct FcTrace *t, const char *class_name, uint64_t *out);

/**
 * Value (0 or 1) of the invariant of a degree-one cocycle on a trace.
 * `class_expr` is `alpha`, `beta`, `gamma` or a cochain expression;
 * `variant` must be `Full` or `Admissible`.
 *
 * # Safety
 * `t` must be a live handle, `class_expr` a NUL-terminated string and `out` writable.
 */
enum FcStatus fc_invariant_evaluate(enum FcVariant variant,
                                    const char *class_expr,
                                    const struct FcTrace *t,
                                    uint8_t *out);

/**
 * Runs all twelve verification claims with `trials` random traces and
 * writes how many passed.
 *
 * # Safety
 * `out` must be writable.
 */
enum FcStatus fc_verify_all(uint64_t trials, uint32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIBERCOMPLEX_H */
