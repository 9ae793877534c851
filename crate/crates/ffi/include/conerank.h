#ifndef CONERANK_H
#define CONERANK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. Values 2, 3 and 4 match the CLI exit codes.
 */
typedef enum ConerankStatus {
  CONERANK_STATUS_OK = 0,
  /*
   Unexpected failure, including a caught panic.
   */
  CONERANK_STATUS_INTERNAL = 1,
  /*
   Malformed input: dimensions, ids, numbers, zero weights.
   */
  CONERANK_STATUS_INVALID_INPUT = 2,
  /*
   The cone or weight bounds are empty or improper.
   */
  CONERANK_STATUS_INFEASIBLE_CONE = 3,
  /*
   The cone lacks a property the operation needs, e.g. pointedness.
   */
  CONERANK_STATUS_PRECONDITION = 4,
  /*
   A required pointer argument was null.
   */
  CONERANK_STATUS_NULL_POINTER = 5,
  /*
   An output buffer is too small.
   */
  CONERANK_STATUS_BUFFER_TOO_SMALL = 6,
} ConerankStatus;

/*
 Opaque set of alternatives.
 */
typedef struct ConerankAlternatives ConerankAlternatives;

/*
 Opaque polyhedral ordering cone.
 */
typedef struct ConerankCone ConerankCone;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. The pointer
 stays valid until the next call into this library on the same thread.
 */
const char *conerank_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *conerank_version(void);

/*
 Builds `n` alternatives from a row-major `n * dim` array. Ids are `x1..xn`.

 # Safety
 `coords` must point to `n * dim` doubles and `out` must be writable.
 */
enum ConerankStatus conerank_alternatives_new(const double *coords,
                                              size_t n,
                                              size_t dim,
                                              struct ConerankAlternatives **out);

/*
 Parses CSV text (`id,c1,...,cd[,label]`) with exact decimal coordinates.
 Labels are ignored.

 # Safety
 `csv` must be a NUL-terminated string and `out` must be writable.
 */
enum ConerankStatus conerank_alternatives_from_csv(const char *csv,
                                                   struct ConerankAlternatives **out);

/*
 # Safety
 `alts` must be null or a handle that has not been freed.
 */
void conerank_alternatives_free(struct ConerankAlternatives *alts);

/*
 Number of alternatives, 0 for a null handle.

 # Safety
 `alts` must be null or a live handle.
 */
size_t conerank_alternatives_len(const struct ConerankAlternatives *alts);

/*
 Number of criteria, 0 for a null handle.

 # Safety
 `alts` must be null or a live handle.
 */
size_t conerank_alternatives_dim(const struct ConerankAlternatives *alts);

/*
 The nonnegative orthant of `R^dim`.

 # Safety
 `out` must be writable.
 */
enum ConerankStatus conerank_cone_orthant(size_t dim, struct ConerankCone **out);

/*
 Cone generated by `k` integer rays, row-major `k * dim`.

 # Safety
 `rays` must point to `k * dim` integers and `out` must be writable.
 */
enum ConerankStatus conerank_cone_from_rays(const int64_t *rays,
                                            size_t k,
                                            size_t dim,
                                            struct ConerankCone **out);

/*
 Cone whose dual is generated by `k` integer weight directions.

 # Safety
 `dual_rays` must point to `k * dim` integers and `out` must be writable.
 */
enum ConerankStatus conerank_cone_from_dual_rays(const int64_t *dual_rays,
                                                 size_t k,
                                                 size_t dim,
                                                 struct ConerankCone **out);

/*
 Cone whose dual is spanned by the normalized weights with
 `mins[i] <= w_i <= maxs[i]`. Bounds are decimal or fraction strings.

 # Safety
 `mins` and `maxs` must each point to `dim` NUL-terminated strings and
 `out` must be writable.
 */
enum ConerankStatus conerank_cone_from_weight_bounds(const char *const *mins,
                                                     const char *const *maxs,
                                                     size_t dim,
                                                     struct ConerankCone **out);

/*
 # Safety
 `cone` must be null or a handle that has not been freed.
 */
void conerank_cone_free(struct ConerankCone *cone);

/*
 Whether the cone contains no line.

 # Safety
 `cone` must be null or a live handle.
 */
bool conerank_cone_is_pointed(const struct ConerankCone *cone);

/*
 Number of alternatives `x` with `w.x <= w.z`.

 # Safety
 `w` and `z` must each point to `dim(alts)` doubles, `out` must be writable.
 */
enum ConerankStatus conerank_rank_w(const struct ConerankAlternatives *alts,
                                    const double *w,
                                    const double *z,
                                    size_t *out);

/*
 Cone rank of the point `z`: the minimum of the weighted rank over nonzero
 weights of the dual cone.

 # Safety
 `z` must point to `dim(alts)` doubles, `out` must be writable.
 */
enum ConerankStatus conerank_rank_cone(const struct ConerankAlternatives *alts,
                                       const struct ConerankCone *cone,
                                       const double *z,
                                       size_t *out);

/*
 Cone rank of every alternative, in input order. `out` must hold at least
 `len(alts)` entries, otherwise `BufferTooSmall` is returned.

 # Safety
 `out` must point to `out_len` writable entries.
 */
enum ConerankStatus conerank_rank_all(const struct ConerankAlternatives *alts,
                                      const struct ConerankCone *cone,
                                      size_t *out,
                                      size_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONERANK_H */
