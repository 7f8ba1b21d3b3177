#ifndef SYMMEC_H
#define SYMMEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SymmecStatus {
  SYMMEC_STATUS_OK = 0,
  SYMMEC_STATUS_NULL_ARGUMENT = 1,
  SYMMEC_STATUS_INVALID_ARGUMENT = 2,
  SYMMEC_STATUS_PARSE = 3,
  SYMMEC_STATUS_VALIDATION = 4,
  SYMMEC_STATUS_OUT_OF_RANGE = 5,
  SYMMEC_STATUS_INVARIANT = 6,
  SYMMEC_STATUS_IO = 7,
  SYMMEC_STATUS_PANIC = 8,
} SymmecStatus;

typedef enum SymmecAlgo {
  SYMMEC_ALGO_SEPARATOR = 0,
  SYMMEC_ALGO_CLASSICAL = 1,
} SymmecAlgo;

/**
 * An MDP with optional priorities.
 */
typedef struct SymmecMdp SymmecMdp;

/**
 * Non-trivial MECs, each sorted, listed by smallest member.
 */
typedef struct SymmecMecs SymmecMecs;

/**
 * A sorted vertex list (a winning region).
 */
typedef struct SymmecVertexList SymmecVertexList;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *symmec_last_error(void);

/**
 * Parses an MDP in the text format from a NUL-terminated string.
 *
 * # Safety
 * `text` must be a valid C string and `out` a valid pointer.
 */
enum SymmecStatus symmec_mdp_parse(const char *text, struct SymmecMdp **out);

/**
 * Builds an MDP from `n` player flags (`random[v] != 0` marks a random
 * vertex) and `m` edges given as `2·m` ids `u0 v0 u1 v1 …`.
 *
 * # Safety
 * `random` must point to `n` bytes, `edges` to `2·m` integers.
 */
enum SymmecStatus symmec_mdp_from_edges(size_t n,
                                        const uint8_t *random,
                                        const uint32_t *edges,
                                        size_t m,
                                        struct SymmecMdp **out);

/**
 * Attaches one priority per vertex (needed by [`symmec_parity`]).
 *
 * # Safety
 * `mdp` must be a live handle and `priorities` point to `n` integers.
 */
enum SymmecStatus symmec_mdp_set_priorities(struct SymmecMdp *mdp,
                                            const uint32_t *priorities,
                                            size_t n);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `mdp` must be null or a live handle.
 */
size_t symmec_mdp_vertex_count(const struct SymmecMdp *mdp);

/**
 * # Safety
 * `mdp` must be null or a handle not freed before.
 */
void symmec_mdp_free(struct SymmecMdp *mdp);

/**
 * MEC decomposition. `gamma = 0` selects the default separator parameter;
 * it is ignored by the classical algorithm.
 *
 * # Safety
 * `mdp` must be a live handle and `out` a valid pointer.
 */
enum SymmecStatus symmec_mec(const struct SymmecMdp *mdp,
                             enum SymmecAlgo algo,
                             size_t gamma,
                             struct SymmecMecs **out);

/**
 * # Safety
 * `mecs` must be null or a live handle.
 */
size_t symmec_mecs_count(const struct SymmecMecs *mecs);

/**
 * Symbolic operations used to compute the decomposition.
 *
 * # Safety
 * `mecs` must be null or a live handle.
 */
uint64_t symmec_mecs_ops(const struct SymmecMecs *mecs);

/**
 * Borrows MEC `index`; the ids stay valid until the handle is freed.
 *
 * # Safety
 * `mecs` must be a live handle; `ids` and `len` valid pointers.
 */
enum SymmecStatus symmec_mecs_get(const struct SymmecMecs *mecs,
                                  size_t index,
                                  const uint32_t **ids,
                                  size_t *len);

/**
 * # Safety
 * `mecs` must be null or a handle not freed before.
 */
void symmec_mecs_free(struct SymmecMecs *mecs);

/**
 * Vertices that reach the `len` targets almost surely.
 *
 * # Safety
 * `mdp` must be a live handle, `targets` point to `len` ids (may be null
 * when `len` is 0) and `out` be a valid pointer.
 */
enum SymmecStatus symmec_asreach(const struct SymmecMdp *mdp,
                                 const uint32_t *targets,
                                 size_t len,
                                 enum SymmecAlgo algo,
                                 size_t gamma,
                                 struct SymmecVertexList **out);

/**
 * Almost-sure winning set of the parity objective given by the priorities.
 *
 * # Safety
 * `mdp` must be a live handle and `out` a valid pointer.
 */
enum SymmecStatus symmec_parity(const struct SymmecMdp *mdp,
                                enum SymmecAlgo algo,
                                size_t gamma,
                                struct SymmecVertexList **out);

/**
 * # Safety
 * `list` must be null or a live handle.
 */
size_t symmec_list_len(const struct SymmecVertexList *list);

/**
 * The ids, valid until the handle is freed; null for a null handle.
 *
 * # Safety
 * `list` must be null or a live handle.
 */
const uint32_t *symmec_list_data(const struct SymmecVertexList *list);

/**
 * # Safety
 * `list` must be null or a live handle.
 */
uint64_t symmec_list_ops(const struct SymmecVertexList *list);

/**
 * # Safety
 * `list` must be null or a handle not freed before.
 */
void symmec_list_free(struct SymmecVertexList *list);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMMEC_H */
