#ifndef CVC_H
#define CVC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Graph class that `G - S` belongs to.
 */
typedef enum CvcKind {
  CVC_KIND_SPLIT = 0,
  CVC_KIND_CLIQUE = 1,
  CVC_KIND_CLUSTER = 2,
  CVC_KIND_DEGREE1 = 3,
  CVC_KIND_CHORDAL = 4,
  /**
   * `G - S` is covered by few cliques; a cover is computed internally.
   */
  CVC_KIND_CLIQUE_COVER = 5,
} CvcKind;

/**
 * Result codes. Zero is success, positive values are non-error outcomes,
 * negative values are errors.
 */
typedef enum CvcStatus {
  CVC_STATUS_OK = 0,
  /**
   * No connected vertex cover within the requested size.
   */
  CVC_STATUS_INFEASIBLE = 1,
  CVC_STATUS_NULL_POINTER = -1,
  CVC_STATUS_PARSE = -2,
  CVC_STATUS_VERTEX_OUT_OF_RANGE = -3,
  CVC_STATUS_KIND_MISMATCH = -4,
  CVC_STATUS_NOT_APPLICABLE = -5,
  CVC_STATUS_INVALID_PARAMETER = -6,
  CVC_STATUS_CHAIN_MISMATCH = -7,
  CVC_STATUS_INTERNAL = -100,
} CvcStatus;

typedef struct CvcGraph CvcGraph;

typedef struct CvcKernel CvcKernel;

typedef struct CvcVertexSet CvcVertexSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * call that fails; empty if none has.
 */
const char *cvc_last_error(void);

/**
 * Builds a graph on `n` vertices from `m` edges given as `2m` endpoints.
 *
 * # Safety
 * `edges` must point to `2 * m` readable values (may be null when `m == 0`),
 * `out` must be writable.
 */
enum CvcStatus cvc_graph_new(size_t n,
                             const uint32_t *edges,
                             size_t m,
                             struct CvcGraph **out_graph);

/**
 * Parses a DIMACS edge list (`p edge n m` then `e u v`, 1-indexed).
 *
 * # Safety
 * `text` must be a NUL-terminated string, `out` must be writable.
 */
enum CvcStatus cvc_graph_from_dimacs(const char *text, struct CvcGraph **out_graph);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
size_t cvc_graph_vertex_count(const struct CvcGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
size_t cvc_graph_edge_count(const struct CvcGraph *g);

/**
 * # Safety
 * `g` must come from this library and not be used afterwards. Null is a no-op.
 */
void cvc_graph_free(struct CvcGraph *g);

/**
 * Whether `len` vertices form a connected vertex cover of `g`. Returns 1,
 * 0, or a negative status on bad input.
 *
 * # Safety
 * `g` must be live, `vertices` must hold `len` values.
 */
int32_t cvc_is_connected_vertex_cover(const struct CvcGraph *g,
                                      const uint32_t *vertices,
                                      size_t len);

/**
 * Minimum connected vertex cover of `g` given a modulator `S` such that
 * `G - S` is in class `kind`. With `ell >= 0` only covers of at most `ell`
 * vertices count, and `Infeasible` is returned when none exists.
 *
 * # Safety
 * `g` must be live, `modulator` must hold `len` values, `out` must be writable.
 */
enum CvcStatus cvc_solve(const struct CvcGraph *g,
                         enum CvcKind kind,
                         const uint32_t *modulator,
                         size_t len,
                         int64_t ell,
                         struct CvcVertexSet **out_cover);

/**
 * # Safety
 * `s` must be a live vertex-set handle.
 */
size_t cvc_vertex_set_len(const struct CvcVertexSet *s);

/**
 * Borrowed pointer to the sorted vertices, valid while `s` lives.
 *
 * # Safety
 * `s` must be a live vertex-set handle.
 */
const uint32_t *cvc_vertex_set_data(const struct CvcVertexSet *s);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is a no-op.
 */
void cvc_vertex_set_free(struct CvcVertexSet *s);

/**
 * Approximate kernel with ratio `alpha_num / alpha_den > 1`. `k < 0` uses
 * the modulator size (or the cover size for `CliqueCover` with empty `S`).
 *
 * # Safety
 * As for [`cvc_solve`].
 */
enum CvcStatus cvc_kernelize(const struct CvcGraph *g,
                             enum CvcKind kind,
                             const uint32_t *modulator,
                             size_t len,
                             int64_t k,
                             int64_t alpha_num,
                             int64_t alpha_den,
                             struct CvcKernel **out_kernel);

/**
 * Copy of the reduced graph.
 *
 * # Safety
 * `kern` must be live, `out` writable.
 */
enum CvcStatus cvc_kernel_graph(const struct CvcKernel *kern, struct CvcGraph **out_graph);

/**
 * Modulator of the reduced instance.
 *
 * # Safety
 * `kern` must be live, `out` writable.
 */
enum CvcStatus cvc_kernel_modulator(const struct CvcKernel *kern, struct CvcVertexSet **out_set);

/**
 * Proven upper bound on the reduced vertex count.
 *
 * # Safety
 * `kern` must be live.
 */
uint64_t cvc_kernel_size_bound(const struct CvcKernel *kern);

/**
 * Maps a connected vertex cover of the reduced graph to one of the
 * original graph.
 *
 * # Safety
 * `kern` must be live, `solution` must hold `len` values, `out` writable.
 */
enum CvcStatus cvc_kernel_lift(const struct CvcKernel *kern,
                               const uint32_t *solution,
                               size_t len,
                               struct CvcVertexSet **out_cover);

/**
 * # Safety
 * `kern` must come from this library and not be used afterwards. Null is a no-op.
 */
void cvc_kernel_free(struct CvcKernel *kern);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CVC_H */
