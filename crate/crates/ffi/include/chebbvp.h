#ifndef CHEBBVP_H
#define CHEBBVP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BvpStatus {
  BVP_STATUS_OK = 0,
  BVP_STATUS_NULL_POINTER = 1,
  BVP_STATUS_INVALID_UTF8 = 2,
  BVP_STATUS_PARSE = 3,
  BVP_STATUS_SINGULAR = 4,
  BVP_STATUS_DOMAIN = 5,
  BVP_STATUS_INVALID_ARGUMENT = 6,
  BVP_STATUS_BUFFER_TOO_SMALL = 7,
  BVP_STATUS_PANIC = 8,
} BvpStatus;

/**
 * A parsed problem.
 */
typedef struct BvpProblem BvpProblem;

/**
 * A solved problem: series for `y` and its first `m - 1` derivatives.
 */
typedef struct BvpSolution BvpSolution;

typedef struct BvpDiagnostics {
  double residual_inf;
  double bc_residual_inf;
  double condition_estimate;
  bool ill_conditioned;
  size_t n;
} BvpDiagnostics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse problem-file text into a new handle stored in `*out`.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BvpStatus bvp_problem_parse(const char *src, struct BvpProblem **out);

/**
 * # Safety
 * `p` must come from [`bvp_problem_parse`] and not be freed twice. Null is ignored.
 */
void bvp_problem_free(struct BvpProblem *p);

/**
 * Order m of the equation, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t bvp_problem_order(const struct BvpProblem *p);

/**
 * # Safety
 * `p` must be a live handle; `a` and `b` valid pointers.
 */
enum BvpStatus bvp_problem_interval(const struct BvpProblem *p, double *a, double *b);

/**
 * Solve at polynomial degree `n`; the new solution handle goes to `*out`.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum BvpStatus bvp_solve(const struct BvpProblem *p, size_t n, struct BvpSolution **out);

/**
 * # Safety
 * `s` must come from [`bvp_solve`] and not be freed twice. Null is ignored.
 */
void bvp_solution_free(struct BvpSolution *s);

/**
 * # Safety
 * `s` must be null or a live handle.
 */
size_t bvp_solution_order(const struct BvpSolution *s);

/**
 * # Safety
 * `s` must be null or a live handle.
 */
size_t bvp_solution_degree(const struct BvpSolution *s);

/**
 * Value of `y^(deriv)` at `t`, for `deriv < order`.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum BvpStatus bvp_solution_eval(const struct BvpSolution *s, double t, size_t deriv, double *out);

/**
 * Copy the `degree + 1` Chebyshev coefficients of component `component`
 * (the series for `y^(component)`) into `buf`.
 *
 * # Safety
 * `s` must be a live handle and `buf` valid for `len` writes.
 */
enum BvpStatus bvp_solution_coeffs(const struct BvpSolution *s,
                                   size_t component,
                                   double *buf,
                                   size_t len);

/**
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum BvpStatus bvp_solution_diagnostics(const struct BvpSolution *s, struct BvpDiagnostics *out);

/**
 * Write the `n + 1` collocation nodes on `[a, b]` (from `b` down to `a`) into `buf`.
 *
 * # Safety
 * `buf` must be valid for `len` writes.
 */
enum BvpStatus bvp_cheb_nodes(size_t n, double a, double b, double *buf, size_t len);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library from the same thread.
 */
const char *bvp_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *bvp_status_name(enum BvpStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHEBBVP_H */
