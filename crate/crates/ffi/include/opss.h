#ifndef OPSS_H
#define OPSS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum {
  OPSS_STATUS_OK = 0,
  OPSS_STATUS_IO_ERROR = 1,
  OPSS_STATUS_VALIDATION_ERROR = 2,
  OPSS_STATUS_CAPACITY_ERROR = 3,
  OPSS_STATUS_NULL_ARGUMENT = 4,
  OPSS_STATUS_UTF8_ERROR = 5,
  OPSS_STATUS_BUFFER_TOO_SMALL = 6,
} OpssStatus;

/**
 * Max-coverage solver selector.
 */
typedef enum {
  OPSS_SOLVER_GREEDY = 0,
  OPSS_SOLVER_LAZY = 1,
  OPSS_SOLVER_EXACT = 2,
} OpssSolver;

/**
 * Sample-based algorithm selector.
 */
typedef enum {
  OPSS_ALGORITHM_GENERAL = 0,
  OPSS_ALGORITHM_UNIFORM_K = 1,
  OPSS_ALGORITHM_LARGE_SAMPLE = 2,
} OpssAlgorithm;

/**
 * Opaque bipartite graph handle.
 */
typedef struct OpssGraph OpssGraph;

/**
 * Opaque sample-log handle.
 */
typedef struct OpssSampleLog OpssSampleLog;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the most recent error message for this thread into `buf` (NUL
 * terminated, truncated to `capacity`). Returns the full message length in
 * bytes excluding the terminator, or 0 when no error is recorded.
 *
 * # Safety
 * `buf` must point to `capacity` writable bytes, or be null (length query).
 */
size_t opss_last_error(char *buf, size_t capacity);

/**
 * Build a graph from a flat edge list (`edges_left[i]` covers
 * `edges_right[i]`). Duplicate edges are allowed.
 *
 * # Safety
 * The edge arrays must hold `n_edges` entries each; `out` must be a valid
 * pointer to receive the handle.
 */
OpssStatus opss_graph_new(size_t n_left,
                          size_t n_right,
                          const size_t *edges_left,
                          const size_t *edges_right,
                          size_t n_edges,
                          OpssGraph **out);

/**
 * Read a graph from the text format.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid.
 */
OpssStatus opss_graph_read(const char *path, OpssGraph **out);

/**
 * Write a graph in the canonical text format.
 *
 * # Safety
 * `graph` must be a live handle; `path` a NUL-terminated string.
 */
OpssStatus opss_graph_write(const OpssGraph *graph, const char *path);

/**
 * Release a graph handle. Null is a no-op.
 *
 * # Safety
 * `graph` must have come from this library and not been freed before.
 */
void opss_graph_free(OpssGraph *graph);

/**
 * Number of left nodes, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be a live handle or null.
 */
size_t opss_graph_n_left(const OpssGraph *graph);

/**
 * Number of right nodes, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be a live handle or null.
 */
size_t opss_graph_n_right(const OpssGraph *graph);

/**
 * Coverage value of a left node set.
 *
 * # Safety
 * `members` must hold `n_members` entries; `out_value` must be valid.
 */
OpssStatus opss_graph_coverage_value(const OpssGraph *graph,
                                     const size_t *members,
                                     size_t n_members,
                                     size_t *out_value);

/**
 * Solve maximum coverage at the given budget. The chosen indices are
 * written to `out_indices` (sorted ascending) and the coverage value to
 * `out_value`.
 *
 * # Safety
 * Buffers must match their stated capacities; out pointers must be valid.
 */
OpssStatus opss_solve(const OpssGraph *graph,
                      size_t budget,
                      OpssSolver solver,
                      size_t *out_indices,
                      size_t capacity,
                      size_t *out_len,
                      size_t *out_value);

/**
 * Draw `t` structured samples from a distribution spec (for example
 * `"uniform-exact-k n=20 k=5"`) against the graph.
 *
 * # Safety
 * `dist` must be a NUL-terminated string; `out` must be valid.
 */
OpssStatus opss_sample_log_generate(const OpssGraph *graph,
                                    const char *dist,
                                    size_t k,
                                    size_t t,
                                    uint64_t seed,
                                    OpssSampleLog **out);

/**
 * Read a sample log file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid.
 */
OpssStatus opss_sample_log_read(const char *path, OpssSampleLog **out);

/**
 * Write a sample log file.
 *
 * # Safety
 * `log` must be a live handle; `path` a NUL-terminated string.
 */
OpssStatus opss_sample_log_write(const OpssSampleLog *log, const char *path);

/**
 * Number of samples in the log, or 0 for a null handle.
 *
 * # Safety
 * `log` must be a live handle or null.
 */
size_t opss_sample_log_len(const OpssSampleLog *log);

/**
 * The constraint `k` recorded in the log header, or 0 for a null handle.
 *
 * # Safety
 * `log` must be a live handle or null.
 */
size_t opss_sample_log_k(const OpssSampleLog *log);

/**
 * Release a sample-log handle. Null is a no-op.
 *
 * # Safety
 * `log` must have come from this library and not been freed before.
 */
void opss_sample_log_free(OpssSampleLog *log);

/**
 * Run a sample-based algorithm on a log. `eps` is only read for the
 * uniform-k algorithm. The returned feasible set is written to
 * `out_indices`.
 *
 * # Safety
 * Buffers must match their stated capacities; out pointers must be valid.
 */
OpssStatus opss_run(const OpssSampleLog *log,
                    OpssAlgorithm algorithm,
                    size_t k,
                    double eps,
                    OpssSolver solver,
                    uint64_t seed,
                    size_t *out_indices,
                    size_t capacity,
                    size_t *out_len);

/**
 * Exhaustively check the negative-correlation inequality for a distribution
 * spec. Writes whether it holds everywhere, the worst signed violation, and
 * the number of pairs tested.
 *
 * # Safety
 * `dist` must be a NUL-terminated string; out pointers must be valid.
 */
OpssStatus opss_check_negative_correlation(const char *dist,
                                           bool *out_holds,
                                           double *out_worst_violation,
                                           uint64_t *out_pairs_tested);

/**
 * Probability that a degree-`d` right node is covered by a uniform size-`k`
 * subset of `n` left nodes.
 *
 * # Safety
 * `out_probability` must be valid.
 */
OpssStatus opss_coverage_probability_exact(size_t n, size_t k, size_t d, double *out_probability);

/**
 * Sample count required by the general guarantee for inclusion exponent `c`
 * and failure probability `delta`.
 *
 * # Safety
 * `out_samples` must be valid.
 */
OpssStatus opss_required_samples_general(size_t n,
                                         size_t m,
                                         double c,
                                         double delta,
                                         uint64_t *out_samples);

/**
 * Static library version string.
 */
const char *opss_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPSS_H */
