#ifndef UNITLAB_H
#define UNITLAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define UL_OK 0

#define UL_ERR_NULL 1

#define UL_ERR_INVALID 2

#define UL_ERR_DIMENSION 3

#define UL_ERR_NOT_LATTICE 4

#define UL_ERR_PROTOCOL 5

#define UL_ERR_INVARIANT 6

#define UL_ERR_ORACLE_LIMIT 7

#define UL_ERR_INTERNAL 8

#define UL_ALG_GRID 0

#define UL_ALG_GREEDY 1

#define UL_ALG_CENTERED 2

#define UL_ALG_FIRSTFIT 3

#define UL_ALG_MALICIOUS 5

typedef struct UlClusterer UlClusterer;

typedef struct UlCoverer UlCoverer;

typedef struct UlReweigh UlReweigh;

typedef struct UlDuelResult {
  uint64_t alg_count;
  uint64_t opt;
  /**
   * Named checks that failed; the game still ran to the end.
   */
  uint32_t failed_checks;
} UlDuelResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null after a successful call.
 * Valid until the next call on the same thread.
 */
const char *ul_last_error(void);

/**
 * Minimum number of closed unit cubes covering the points.
 *
 * # Safety
 * `nums` points to `n * d` readable values; `opt` is writable.
 */
int32_t ul_exact_opt(const int64_t *nums, size_t n, size_t d, int64_t den, size_t *opt);

/**
 * `alg` is `UL_ALG_GRID` or `UL_ALG_GREEDY`.
 *
 * # Safety
 * `out` is writable; free the handle with `ul_clusterer_free`.
 */
int32_t ul_clusterer_new(uint32_t alg, size_t d, struct UlClusterer **out);

/**
 * Inserts one point of the clusterer's dimension.
 *
 * # Safety
 * `h` comes from `ul_clusterer_new`; `nums` holds `d` values; `cluster`
 * and `opened` may be null.
 */
int32_t ul_clusterer_insert(struct UlClusterer *h,
                            const int64_t *nums,
                            int64_t den,
                            size_t *cluster,
                            bool *opened);

/**
 * Clusters opened so far; 0 for a null handle.
 *
 * # Safety
 * `h` is null or comes from `ul_clusterer_new`.
 */
size_t ul_clusterer_count(const struct UlClusterer *h);

/**
 * # Safety
 * `h` is null or comes from `ul_clusterer_new` and is not used again.
 */
void ul_clusterer_free(struct UlClusterer *h);

/**
 * `alg` is `UL_ALG_GRID`, `UL_ALG_CENTERED` or `UL_ALG_FIRSTFIT`.
 *
 * # Safety
 * `out` is writable; free the handle with `ul_coverer_free`.
 */
int32_t ul_coverer_new(uint32_t alg, size_t d, struct UlCoverer **out);

/**
 * Covers one point; `lo` (may be null) receives the lower corner of its
 * cube as `d` numerators over `den`, which fails if a corner coordinate
 * is not a multiple of `1/den`.
 *
 * # Safety
 * `h` comes from `ul_coverer_new`; `nums` holds `d` values; `lo` is null
 * or holds `d` writable values.
 */
int32_t ul_coverer_cover(struct UlCoverer *h,
                         const int64_t *nums,
                         int64_t den,
                         size_t *cube,
                         bool *opened,
                         int64_t *lo);

/**
 * Cubes placed so far; 0 for a null handle.
 *
 * # Safety
 * `h` is null or comes from `ul_coverer_new`.
 */
size_t ul_coverer_count(const struct UlCoverer *h);

/**
 * # Safety
 * `h` is null or comes from `ul_coverer_new` and is not used again.
 */
void ul_coverer_free(struct UlCoverer *h);

/**
 * Randomized covering of integer points, seeded.
 *
 * # Safety
 * `out` is writable; free the handle with `ul_reweigh_free`.
 */
int32_t ul_reweigh_new(size_t d, uint64_t seed, struct UlReweigh **out);

/**
 * Inserts an integer point. `branch` receives 1..=4, `lo` (may be null)
 * the `d` coordinates of the assigned cube's lower corner.
 *
 * # Safety
 * `h` comes from `ul_reweigh_new`; `coords` holds `d` values; `lo` is null
 * or holds `d` writable values.
 */
int32_t ul_reweigh_insert(struct UlReweigh *h,
                          const int64_t *coords,
                          uint8_t *branch,
                          bool *opened,
                          int64_t *lo);

/**
 * Cubes opened so far; 0 for a null handle.
 *
 * # Safety
 * `h` is null or comes from `ul_reweigh_new`.
 */
size_t ul_reweigh_cube_count(const struct UlReweigh *h);

/**
 * # Safety
 * `h` is null or comes from `ul_reweigh_new` and is not used again.
 */
void ul_reweigh_free(struct UlReweigh *h);

/**
 * One covering-game duel against `alg` (`UL_ALG_GRID`, `UL_ALG_CENTERED`,
 * `UL_ALG_FIRSTFIT` or `UL_ALG_MALICIOUS`). Failed checks are reported in
 * `out`, not as an error status.
 *
 * # Safety
 * `out` is writable.
 */
int32_t ul_covering_duel(uint32_t alg, size_t d, uint64_t seed, struct UlDuelResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNITLAB_H */
