#ifndef CLFCLUSTER_H
#define CLFCLUSTER_H

/* Generated by cbindgen from clfcluster-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum ClfStatus {
  CLF_STATUS_OK = 0,
  CLF_STATUS_NULL_POINTER = 1,
  CLF_STATUS_INVALID_ARGUMENT = 2,
  CLF_STATUS_SHAPE_MISMATCH = 3,
  CLF_STATUS_NUMERICAL_ERROR = 4,
  CLF_STATUS_PARSE_ERROR = 5,
  CLF_STATUS_IO_ERROR = 6,
  CLF_STATUS_CONFIG_ERROR = 7,
} ClfStatus;

/**
 * Opaque column-major data matrix handle.
 */
typedef struct ClfDataMatrix ClfDataMatrix;

/**
 * Opaque solver report handle.
 */
typedef struct ClfSolveReport ClfSolveReport;

/**
 * Solver options; obtain defaults from [`clf_solver_options_default`].
 */
typedef struct ClfSolverOptions {
  /**
   * Regularization weight, > 0.
   */
  double lambda;
  /**
   * Cauchy scale constant, > 0.
   */
  double c;
  /**
   * Relative-change convergence threshold, > 0.
   */
  double tol;
  /**
   * Iteration cap, >= 1.
   */
  size_t max_iter;
  /**
   * Nonzero warm-starts from the least-squares solution.
   */
  int use_lsr_init;
} ClfSolverOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent non-OK status on this thread, or null.
 * Valid until the next failing call on the same thread.
 */
const char *clf_last_error_message(void);

struct ClfSolverOptions clf_solver_options_default(void);

/**
 * Wrap `d * n` column-major values into a matrix handle.
 *
 * # Safety
 * `values` must point to `d * n` readable doubles; `out` must be writable.
 */
enum ClfStatus clf_data_matrix_new(const double *values,
                                   size_t d,
                                   size_t n,
                                   struct ClfDataMatrix **out);

/**
 * # Safety
 * `handle` must come from [`clf_data_matrix_new`] and not be freed twice.
 */
void clf_data_matrix_free(struct ClfDataMatrix *handle);

/**
 * Scale every column of the matrix to unit norm, in place.
 *
 * # Safety
 * `handle` must be a live matrix handle.
 */
enum ClfStatus clf_data_matrix_normalize_columns(struct ClfDataMatrix *handle);

/**
 * Run the re-weighted-residuals solver; on success `*out` owns the report.
 *
 * # Safety
 * `x` must be a live matrix handle; `opts` and `out` must be valid pointers.
 */
enum ClfStatus clf_solve(const struct ClfDataMatrix *x,
                         const struct ClfSolverOptions *opts,
                         struct ClfSolveReport **out);

/**
 * # Safety
 * `report` must come from [`clf_solve`] and not be freed twice.
 */
void clf_solve_report_free(struct ClfSolveReport *report);

/**
 * Number of samples `n`; the representation is `n x n`.
 *
 * # Safety
 * `report` must be a live report handle.
 */
size_t clf_solve_report_n(const struct ClfSolveReport *report);

/**
 * Column-major `n x n` representation matrix; valid until the report is freed.
 *
 * # Safety
 * `report` must be a live report handle.
 */
const double *clf_solve_report_z(const struct ClfSolveReport *report);

/**
 * # Safety
 * `report` must be a live report handle.
 */
size_t clf_solve_report_iterations(const struct ClfSolveReport *report);

/**
 * # Safety
 * `report` must be a live report handle.
 */
int clf_solve_report_converged(const struct ClfSolveReport *report);

/**
 * Frobenius norm of the objective gradient at the solution.
 *
 * # Safety
 * `report` must be a live report handle.
 */
double clf_solve_report_stationarity(const struct ClfSolveReport *report);

/**
 * Objective values per sweep (initial value first); length goes to `*len`.
 * Valid until the report is freed.
 *
 * # Safety
 * `report` must be a live report handle; `len` must be writable.
 */
const double *clf_solve_report_objective_history(const struct ClfSolveReport *report, size_t *len);

/**
 * Full pipeline: solve, symmetrize into an affinity, cluster with
 * normalized cuts. Writes one label per sample into `labels_out`.
 *
 * # Safety
 * `x` must be a live matrix handle; `opts` must be valid; `labels_out` must
 * point to `n` writable `uint32_t`.
 */
enum ClfStatus clf_cluster(const struct ClfDataMatrix *x,
                           size_t k,
                           const struct ClfSolverOptions *opts,
                           uint64_t seed,
                           uint32_t *labels_out);

/**
 * K-means directly on the matrix columns; writes one label per sample.
 *
 * # Safety
 * `x` must be a live matrix handle; `labels_out` must point to `n` writable
 * `uint32_t`.
 */
enum ClfStatus clf_kmeans(const struct ClfDataMatrix *x,
                          size_t k,
                          size_t restarts,
                          size_t max_iter,
                          uint64_t seed,
                          uint32_t *labels_out);

/**
 * Clustering accuracy under the optimal label mapping.
 *
 * # Safety
 * `gt` and `pred` must point to `n` readable `uint32_t`; `out` must be
 * writable.
 */
enum ClfStatus clf_accuracy(const uint32_t *gt, const uint32_t *pred, size_t n, double *out);

/**
 * Normalized mutual information between two labelings.
 *
 * # Safety
 * `gt` and `pred` must point to `n` readable `uint32_t`; `out` must be
 * writable.
 */
enum ClfStatus clf_nmi(const uint32_t *gt, const uint32_t *pred, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLFCLUSTER_H */
