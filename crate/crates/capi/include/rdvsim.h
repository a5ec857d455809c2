/* C interface for the rdvsim rendezvous simulator. Generated; do not edit. */

#ifndef RDVSIM_H
#define RDVSIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum RdvStatus {
  /**
   * The call succeeded.
   */
  RDV_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  RDV_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  RDV_STATUS_INVALID_UTF8 = 2,
  /**
   * The graph text could not be parsed.
   */
  RDV_STATUS_PARSE_ERROR = 3,
  /**
   * An argument was syntactically fine but semantically invalid
   * (unknown name, start vertex not in the graph, model mismatch, ...).
   */
  RDV_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The execution itself failed (program fault or invalid move).
   */
  RDV_STATUS_EXECUTION_ERROR = 5,
} RdvStatus;

/**
 * Opaque graph handle: the graph plus the instance's designated starts,
 * when it has any.
 */
typedef struct RdvGraph RdvGraph;

/**
 * Outcome of one execution. `meeting_round`, `construct_rounds`, and
 * `strict_runs` are only meaningful when their `has_*` flag is true.
 */
typedef struct RdvRunResult {
  bool met;
  bool has_meeting_round;
  uint64_t meeting_round;
  uint64_t rounds_executed;
  uint64_t moves_a;
  uint64_t moves_b;
  uint64_t restarts;
  bool has_construct_rounds;
  uint64_t construct_rounds;
  bool has_strict_runs;
  uint64_t strict_runs;
} RdvRunResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. Never NULL;
 * empty before the first failure. Valid until the next failing call on
 * the same thread.
 */
const char *rdv_last_error(void);

/**
 * Parse a graph from its text format (`n n_prime` header, one adjacency
 * line per vertex, optional `starts:` line). On success `*out` owns the
 * new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum RdvStatus rdv_graph_from_text(const char *text, struct RdvGraph **out);

/**
 * Generate a seeded instance. `family` is one of `clique`,
 * `random-min-degree`, `double-star`, `glued-cliques`, `distance2-pair`;
 * `target_delta` of 0 means "no target" (it is required by
 * `random-min-degree`). The instance's start vertices are stored in the
 * handle.
 *
 * # Safety
 * `family` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum RdvStatus rdv_graph_generate(const char *family,
                                  uint32_t n,
                                  uint32_t target_delta,
                                  uint64_t seed,
                                  struct RdvGraph **out);

/**
 * Release a handle. NULL is a no-op.
 *
 * # Safety
 * `g` must be NULL or a pointer obtained from a `rdv_graph_*` constructor,
 * not freed before.
 */
void rdv_graph_free(struct RdvGraph *g);

/**
 * Number of vertices; 0 for a NULL handle.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
uint32_t rdv_graph_vertex_count(const struct RdvGraph *g);

/**
 * Number of edges; 0 for a NULL handle.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
uint64_t rdv_graph_edge_count(const struct RdvGraph *g);

/**
 * Minimum degree; 0 for a NULL handle.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
uint32_t rdv_graph_min_degree(const struct RdvGraph *g);

/**
 * Maximum degree; 0 for a NULL handle.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
uint32_t rdv_graph_max_degree(const struct RdvGraph *g);

/**
 * Copy the instance's designated start vertices into `*start_a` /
 * `*start_b`. Fails with `INVALID_ARGUMENT` when the graph carries none.
 *
 * # Safety
 * All pointers must be NULL or valid; `g` must be a live handle.
 */
enum RdvStatus rdv_graph_starts(const struct RdvGraph *g, uint32_t *start_a, uint32_t *start_b);

/**
 * Run one execution of `algo` (`main`, `main-doubling`, `nowb`, `sweep`,
 * or `randomwalk`) under `model` (`kt1` or `portonly`) from the given
 * starts. `max_rounds` of 0 selects the default budget (50x the
 * algorithm's target bound, capped at 10^7).
 *
 * # Safety
 * `g` must be a live handle; `algo`/`model` NUL-terminated strings; `out`
 * a valid pointer.
 */
enum RdvStatus rdv_run(const struct RdvGraph *g,
                       const char *algo,
                       const char *model,
                       uint32_t start_a,
                       uint32_t start_b,
                       uint64_t seed,
                       uint64_t max_rounds,
                       struct RdvRunResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RDVSIM_H */
