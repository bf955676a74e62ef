#ifndef SPX_H
#define SPX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpxStatus {
  SPX_STATUS_OK = 0,
  SPX_STATUS_NULL_POINTER = 1,
  SPX_STATUS_INVALID_ARGUMENT = 2,
  SPX_STATUS_INVALID_GRAPH = 3,
  SPX_STATUS_DISCONNECTED = 4,
  SPX_STATUS_NOT_A_DAG = 5,
  SPX_STATUS_PARSE = 6,
  SPX_STATUS_NUMERICAL = 7,
  SPX_STATUS_BUFFER_TOO_SMALL = 8,
  SPX_STATUS_PANIC = 9,
} SpxStatus;

typedef enum SpxVariant {
  SPX_VARIANT_VANILLA = 0,
  SPX_VARIANT_MOMENTUM = 1,
  SPX_VARIANT_NESTEROV = 2,
  SPX_VARIANT_ADAGRAD = 3,
  SPX_VARIANT_RMS_PROP = 4,
  SPX_VARIANT_ADAM = 5,
} SpxVariant;

typedef enum SpxMode {
  SPX_MODE_CROSSING = 0,
  SPX_MODE_ANGLE = 1,
} SpxMode;

typedef enum SpxInit {
  SPX_INIT_STRESS = 0,
  SPX_INIT_FORCE = 1,
  SPX_INIT_RANDOM = 2,
} SpxInit;

/**
 * Opaque graph handle with its cached distance matrix.
 */
typedef struct SpxGraph SpxGraph;

/**
 * Opaque handle to a finished run.
 */
typedef struct SpxRunResult SpxRunResult;

/**
 * Run configuration. Obtain defaults from [`spx_config_default`].
 */
typedef struct SpxConfig {
  double k;
  enum SpxVariant variant;
  /**
   * Zero or negative selects the variant's default for the graph.
   */
  double learning_rate;
  enum SpxMode mode;
  enum SpxInit init;
  uint64_t seed;
  size_t outer_iters;
  size_t inner_steps;
  bool upward;
  double upward_eps;
  double upward_mu;
  bool frozen_angle;
} SpxConfig;

typedef struct SpxSummary {
  double final_cost;
  double final_stress;
  size_t final_crossings;
  double final_min_angle_deg;
  bool valid;
  size_t lp_fallbacks;
  size_t jitters;
} SpxSummary;

typedef struct SpxTraceRecord {
  size_t iter;
  size_t crossings;
  double stress;
  double min_angle_deg;
  double cost;
} SpxTraceRecord;

typedef struct SpxMetrics {
  double stress;
  size_t crossings;
  double min_crossing_angle_deg;
  double avg_crossing_angle_deg;
  double neighborhood_preservation;
  double drawing_width;
  double drawing_height;
  double drawing_area;
  double upward_fraction;
} SpxMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *spx_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *spx_version(void);

/**
 * Parse a graph in the text edge-list format. The graph must be connected.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum SpxStatus spx_graph_parse(const char *text, struct SpxGraph **out);

/**
 * Complete binary tree with edges directed from parent to child.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SpxStatus spx_graph_binary_tree(uint32_t depth, struct SpxGraph **out);

/**
 * Connected random DAG with `round(density * n)` edges.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SpxStatus spx_graph_random_dag(size_t n, double density, uint64_t seed, struct SpxGraph **out);

/**
 * Connected planted-partition graph.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SpxStatus spx_graph_community(size_t n,
                                   size_t communities,
                                   double p_in,
                                   double p_out,
                                   uint64_t seed,
                                   struct SpxGraph **out);

/**
 * # Safety
 * `graph` must be null or a handle from this library not yet freed.
 */
void spx_graph_free(struct SpxGraph *graph);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t spx_graph_vertex_count(const struct SpxGraph *graph);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t spx_graph_edge_count(const struct SpxGraph *graph);

/**
 * Normalized text form of the graph. Free with [`spx_string_free`].
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum SpxStatus spx_graph_to_text(const struct SpxGraph *graph, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void spx_string_free(char *s);

/**
 * Fill `out` with the library defaults for `graph`.
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum SpxStatus spx_config_default(const struct SpxGraph *graph, struct SpxConfig *out);

/**
 * One optimization run from the configured initializer. An aborted run
 * still yields a result; check `valid` in [`spx_result_summary`].
 *
 * # Safety
 * `graph` must be a live handle; `config` and `out` valid pointers.
 */
enum SpxStatus spx_optimize(const struct SpxGraph *graph,
                            const struct SpxConfig *config,
                            struct SpxRunResult **out);

/**
 * Like [`spx_optimize`] but starting from `2 * n` caller coordinates.
 *
 * # Safety
 * `coords` must point to `len` readable doubles; other pointers as for
 * [`spx_optimize`].
 */
enum SpxStatus spx_optimize_from(const struct SpxGraph *graph,
                                 const struct SpxConfig *config,
                                 const double *coords,
                                 size_t len,
                                 struct SpxRunResult **out);

/**
 * # Safety
 * `result` must be null or a handle from this library not yet freed.
 */
void spx_result_free(struct SpxRunResult *result);

/**
 * Number of vertices in the result layout, or 0 for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
size_t spx_result_vertex_count(const struct SpxRunResult *result);

/**
 * Copy the final coordinates into `buf` (`len >= 2 * n`).
 *
 * # Safety
 * `buf` must point to `len` writable doubles.
 */
enum SpxStatus spx_result_coords(const struct SpxRunResult *result, double *buf, size_t len);

/**
 * # Safety
 * `result` must be a live handle and `out` a valid pointer.
 */
enum SpxStatus spx_result_summary(const struct SpxRunResult *result, struct SpxSummary *out);

/**
 * Number of trace records, or 0 for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
size_t spx_result_trace_len(const struct SpxRunResult *result);

/**
 * Copy the per-iteration trace into `buf` (`len >= trace length`).
 *
 * # Safety
 * `buf` must point to `len` writable records.
 */
enum SpxStatus spx_result_trace(const struct SpxRunResult *result,
                                struct SpxTraceRecord *buf,
                                size_t len);

/**
 * Readability metrics of `2 * n` coordinates drawn with `graph`.
 *
 * # Safety
 * `coords` must point to `len` readable doubles; `out` must be valid.
 */
enum SpxStatus spx_metrics(const struct SpxGraph *graph,
                           const double *coords,
                           size_t len,
                           struct SpxMetrics *out);

/**
 * SVG drawing with default styling. Free with [`spx_string_free`].
 *
 * # Safety
 * `coords` must point to `len` readable doubles; `out` must be valid.
 */
enum SpxStatus spx_render_svg(const struct SpxGraph *graph,
                              const double *coords,
                              size_t len,
                              char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPX_H */
