#ifndef QIMAGE_H
#define QIMAGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum QimStatus {
  QIM_STATUS_OK = 0,
  QIM_STATUS_NULL_POINTER = 1,
  QIM_STATUS_INVALID_UTF8 = 2,
  QIM_STATUS_PARSE_ERROR = 3,
  /**
   * A legitimate negative answer: no solution exists.
   */
  QIM_STATUS_NO_SOLUTION = 4,
  QIM_STATUS_SOLVER_FAILURE = 5,
  QIM_STATUS_BUDGET_EXCEEDED = 6,
  QIM_STATUS_PANIC = 7,
} QimStatus;

/**
 * A quaternion algebra over a field.
 */
typedef struct QimAlgebra QimAlgebra;

/**
 * A multilinear polynomial over the field of the algebra it was parsed for.
 */
typedef struct QimPoly QimPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates an algebra from a field spec (`"GF(3)"`, `"QTower[2]"`, ...) and
 * an algebra spec (`"H(1,1)"`, `"Hq(-1,-1)"`, `"H2[1,1]"`).
 *
 * # Safety
 * `field` and `algebra` must be NUL-terminated strings; `out` must be
 * writable.
 */
enum QimStatus qim_algebra_new(const char *field, const char *algebra, struct QimAlgebra **out);

/**
 * # Safety
 * `alg` must come from [`qim_algebra_new`] and not be used afterwards.
 */
void qim_algebra_free(struct QimAlgebra *alg);

/**
 * Characteristic of the base field (0 for towers over Q, and for null).
 *
 * # Safety
 * `alg` must be null or a live handle.
 */
uint64_t qim_algebra_characteristic(const struct QimAlgebra *alg);

/**
 * Parses a polynomial (`"s2"`, `"standard:3"`, `"deg3:1,0"`, JSON, ...)
 * over the field of `alg`.
 *
 * # Safety
 * `alg` must be a live handle, `spec` a NUL-terminated string, `out`
 * writable.
 */
enum QimStatus qim_poly_parse(const struct QimAlgebra *alg, const char *spec, struct QimPoly **out);

/**
 * # Safety
 * `p` must come from [`qim_poly_parse`] and not be used afterwards.
 */
void qim_poly_free(struct QimPoly *p);

/**
 * Number of variables (0 for null).
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t qim_poly_arity(const struct QimPoly *p);

/**
 * Evaluates `p` on `n_args` quaternions given as strings.
 *
 * # Safety
 * `args` must point to `n_args` NUL-terminated strings; `out` must be
 * writable.
 */
enum QimStatus qim_evaluate(const struct QimAlgebra *alg,
                            const struct QimPoly *p,
                            const char *const *args,
                            size_t n_args,
                            char **out);

/**
 * Writes `x`, `y` with `xy − yx = target`.
 *
 * # Safety
 * `target` must be a NUL-terminated string; `out_x`, `out_y` writable.
 */
enum QimStatus qim_commutator_decompose(const struct QimAlgebra *alg,
                                        const char *target,
                                        char **out_x,
                                        char **out_y);

/**
 * Enumerates the image of `p` (finite fields only) and writes its class
 * name and size.
 *
 * # Safety
 * Handles must be live; `out_class` and `out_size` writable.
 */
enum QimStatus qim_classify(const struct QimAlgebra *alg,
                            const struct QimPoly *p,
                            uint64_t budget,
                            char **out_class,
                            uint64_t *out_size);

/**
 * Runs a command-line job described by a JSON config (or an earlier
 * report) and writes the report JSON. `exit_code` receives the exit code
 * the command-line tool would return: 0 success, 1 error, 2 negative.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `out_report` and
 * `exit_code` writable.
 */
enum QimStatus qim_run(const char *config_json, char **out_report, int32_t *exit_code);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void qim_string_free(char *s);

/**
 * Message for the last failed call on this thread (empty after success).
 * Valid until the next call into the library on the same thread.
 */
const char *qim_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QIMAGE_H */
