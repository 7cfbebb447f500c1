#ifndef SPECINT_H
#define SPECINT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SibStatus {
  SIB_STATUS_OK = 0,
  SIB_STATUS_NULL_POINTER = 1,
  SIB_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Singular system or boundary conditions that do not fix the solution.
   */
  SIB_STATUS_SINGULAR = 3,
  SIB_STATUS_TOO_LARGE = 4,
  SIB_STATUS_PARSE = 5,
  SIB_STATUS_BUFFER_TOO_SMALL = 6,
  SIB_STATUS_PANIC = 7,
} SibStatus;

typedef struct SibSolution SibSolution;

typedef struct SibSolver SibSolver;

/**
 * `derivative`-th derivative at `endpoint` (-1 or +1) equals `value`.
 */
typedef struct SibCondition {
  int32_t endpoint;
  uint32_t derivative;
  double value;
} SibCondition;

/**
 * Outcome of [`sib_run_problem`]; absent quantities are NaN.
 */
typedef struct SibReport {
  double error;
  double grid_error;
  double overshoot;
} SibReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into this library from the same thread.
 */
const char *sib_last_error(void);

/**
 * Static, NUL-terminated.
 */
const char *sib_version(void);

/**
 * Writes the `m + 1` Chebyshev points of order `m` in grid order
 * (`+1` first).
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum SibStatus sib_grid_points(size_t m, double *out, size_t len);

/**
 * Prepares a solver for `Π(D - linear[i]) Π(D² + b_j D + c_j) u = f` with
 * `quadratic` holding `n_quadratic` pairs `(b_j, c_j)`. The number of
 * conditions must equal the order of the operator.
 *
 * # Safety
 * Array arguments must hold the stated number of elements; `out` must be
 * writable. On success `*out` owns a solver to release with
 * [`sib_solver_free`].
 */
enum SibStatus sib_solver_new(const double *linear,
                              size_t n_linear,
                              const double *quadratic,
                              size_t n_quadratic,
                              const struct SibCondition *conditions,
                              size_t n_conditions,
                              size_t m,
                              struct SibSolver **out);

/**
 * # Safety
 * `solver` must be null or come from [`sib_solver_new`], freed once.
 */
void sib_solver_free(struct SibSolver *solver);

/**
 * Solves with the right-hand side given at the solver's Chebyshev points,
 * in the order of [`sib_grid_points`].
 *
 * # Safety
 * `solver` must be live, `f` must hold `len` doubles and `out` must be
 * writable. On success `*out` owns a solution to release with
 * [`sib_solution_free`].
 */
enum SibStatus sib_solver_solve(const struct SibSolver *solver,
                                const double *f,
                                size_t len,
                                struct SibSolution **out);

/**
 * # Safety
 * `solution` must be null or come from [`sib_solver_solve`], freed once.
 */
void sib_solution_free(struct SibSolution *solution);

/**
 * Grid order of the solution; 0 for a null handle.
 *
 * # Safety
 * `solution` must be null or live.
 */
size_t sib_solution_order(const struct SibSolution *solution);

/**
 * # Safety
 * `solution` must be live and `out` writable.
 */
enum SibStatus sib_solution_eval(const struct SibSolution *solution, double y, double *out);

/**
 * Writes the `order + 1` stored Chebyshev coefficients; the first is twice
 * the mean term.
 *
 * # Safety
 * `solution` must be live and `out` must point to `len` writable doubles.
 */
enum SibStatus sib_solution_coeffs(const struct SibSolution *solution, double *out, size_t len);

/**
 * Parses and solves a problem file given as text, as `specint solve` does.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `report` writable.
 */
enum SibStatus sib_run_problem(const char *text, struct SibReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECINT_H */
