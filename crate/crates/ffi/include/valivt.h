#ifndef VALIVT_H
#define VALIVT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ValivtStatus {
  VALIVT_STATUS_OK = 0,
  /**
   * A hypothesis witness: divisibility or exhausted residues.
   */
  VALIVT_STATUS_WITNESS = 2,
  /**
   * Precision exhausted or verification failed.
   */
  VALIVT_STATUS_PRECISION = 3,
  /**
   * Bad input: syntax, mismatched field, violated precondition.
   */
  VALIVT_STATUS_INPUT = 4,
  VALIVT_STATUS_NULL_ARGUMENT = 5,
  VALIVT_STATUS_INTERNAL = 6,
} ValivtStatus;

/**
 * A field model: `puiseux`, `laurent` or `padic:<p>`.
 */
typedef struct ValivtField ValivtField;

/**
 * A polynomial over a field model.
 */
typedef struct ValivtPoly ValivtPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *valivt_last_error(void);

/**
 * Library version, static storage.
 */
const char *valivt_version(void);

/**
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
enum ValivtStatus valivt_field_new(const char *name, struct ValivtField **out);

/**
 * # Safety
 * `field` must come from [`valivt_field_new`] and not be freed twice. Null is ignored.
 */
void valivt_field_free(struct ValivtField *field);

/**
 * Parses a polynomial in `X` over `field`.
 *
 * # Safety
 * `field` must be a live handle, `src` NUL-terminated, `out` writable.
 */
enum ValivtStatus valivt_poly_parse(const struct ValivtField *field,
                                    const char *src,
                                    struct ValivtPoly **out);

/**
 * # Safety
 * `poly` must come from [`valivt_poly_parse`] and not be freed twice. Null is ignored.
 */
void valivt_poly_free(struct ValivtPoly *poly);

/**
 * Newton polygon and tropical function as JSON:
 * `{"slopes":[{"h","mult"}],"phi":[{"segment","slope","intercept"}]}`.
 *
 * # Safety
 * Handles must be live; `out` writable. Free the result with [`valivt_string_free`].
 */
enum ValivtStatus valivt_newton_polygon_json(const struct ValivtField *field,
                                             const struct ValivtPoly *poly,
                                             char **out);

/**
 * `φ_f(γ)` as text, e.g. `"1/2"` or `"inf"`.
 *
 * # Safety
 * Handles must be live, `gamma` NUL-terminated, `out` writable. Free the
 * result with [`valivt_string_free`].
 */
enum ValivtStatus valivt_phi_eval(const struct ValivtField *field,
                                  const struct ValivtPoly *poly,
                                  const char *gamma,
                                  char **out);

/**
 * Solves `v(f(c)) = α` with `v(c)` between `v(a)` and `v(b)`; the solution
 * as JSON with keys `c`, `v_c`, `achieved`, `case`, `retries`.
 *
 * # Safety
 * Handles must be live, strings NUL-terminated, `out` writable. Free the
 * result with [`valivt_string_free`].
 */
enum ValivtStatus valivt_ivt_solve_json(const struct ValivtField *field,
                                        const struct ValivtPoly *poly,
                                        const char *a,
                                        const char *b,
                                        const char *alpha,
                                        char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void valivt_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VALIVT_H */
