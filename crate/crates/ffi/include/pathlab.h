#ifndef PATHLAB_H
#define PATHLAB_H

/* Generated by the pathlab-ffi build script; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum PathlabStatus {
  PATHLAB_STATUS_OK = 0,
  // A required pointer argument was null.
  PATHLAB_STATUS_NULL_POINTER = 1,
  // Arguments were structurally invalid (bad dimensions, bad params).
  PATHLAB_STATUS_INVALID_ARGUMENT = 2,
  // The computation failed numerically (lost interiority, no
  // convergence, enumeration guard, ...).
  PATHLAB_STATUS_NUMERICAL_ERROR = 3,
  // JSON could not be parsed or produced.
  PATHLAB_STATUS_JSON_ERROR = 4,
  // A string argument was not valid UTF-8.
  PATHLAB_STATUS_UTF8_ERROR = 5,
} PathlabStatus;

// Opaque handle to a loaded linear program.
typedef struct PathlabLp PathlabLp;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. The pointer
// stays valid until the next failing call on the same thread. Never null.
const char *pathlab_last_error_message(void);

// Parses an LP from interchange JSON.
//
// # Safety
// `json` must be a NUL-terminated string, `out` a valid pointer. On
// `Ok`, `*out` owns a handle that must be freed with `pathlab_lp_free`.
enum PathlabStatus pathlab_lp_from_json(const char *json, struct PathlabLp **out);

// Generates the worst-case instance with `r` blocks and parameter `t`.
//
// # Safety
// `out` must be a valid pointer; on `Ok`, `*out` owns a handle that must
// be freed with `pathlab_lp_free`.
enum PathlabStatus pathlab_lp_lw(uint32_t r, double t, struct PathlabLp **out);

// Frees a handle. Null is a no-op.
//
// # Safety
// `lp` must be null or a pointer previously returned by this library
// and not yet freed.
void pathlab_lp_free(struct PathlabLp *lp);

// Number of constraints (rows of A). Zero for a null handle.
//
// # Safety
// `lp` must be null or a live handle from this library.
size_t pathlab_lp_rows(const struct PathlabLp *lp);

// Number of variables (columns of A). Zero for a null handle.
//
// # Safety
// `lp` must be null or a live handle from this library.
size_t pathlab_lp_cols(const struct PathlabLp *lp);

// Serializes a handle back to interchange JSON.
//
// # Safety
// `lp` must be a live handle, `out` a valid pointer. On `Ok`, `*out`
// owns a NUL-terminated string freed with `pathlab_string_free`.
enum PathlabStatus pathlab_lp_to_json(const struct PathlabLp *lp, char **out);

// Frees a string returned by this library. Null is a no-op.
//
// # Safety
// `s` must be null or a pointer previously returned by this library and
// not yet freed.
void pathlab_string_free(char *s);

// Follows the central path down to duality gap `tol` and writes the
// solution into `x_out` and its objective value into `value_out`.
// The instance must carry an interior witness.
//
// # Safety
// `lp` must be a live handle; `x_out` must point to at least
// `pathlab_lp_cols(lp)` doubles; `value_out` must be valid.
enum PathlabStatus pathlab_solve(const struct PathlabLp *lp,
                                 double tol,
                                 double *x_out,
                                 double *value_out);

// Centers at barrier parameter `mu` with the log barrier, starting from
// the instance's interior witness; an infinite `mu` computes the
// analytic center. Writes the point into `x_out` and the final Newton
// decrement into `decrement_out`.
//
// # Safety
// `lp` must be a live handle; `x_out` must point to at least
// `pathlab_lp_cols(lp)` doubles; `decrement_out` must be valid.
enum PathlabStatus pathlab_center(const struct PathlabLp *lp,
                                  double mu,
                                  double tol,
                                  double *x_out,
                                  double *decrement_out);

// Exact minimum objective value by basis enumeration. `guard` caps the
// number of basis combinations (0 uses the built-in default).
//
// # Safety
// `lp` must be a live handle and `out` a valid pointer.
enum PathlabStatus pathlab_min_value_oracle(const struct PathlabLp *lp,
                                            uint64_t guard,
                                            double *out);

// Duality gap of a candidate point, available when the instance carries
// its optimal value. `x` holds `pathlab_lp_cols(lp)` doubles.
//
// # Safety
// `lp` must be a live handle; `x` must point to `pathlab_lp_cols(lp)`
// doubles; `out` must be valid.
enum PathlabStatus pathlab_gap(const struct PathlabLp *lp, const double *x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATHLAB_H */
