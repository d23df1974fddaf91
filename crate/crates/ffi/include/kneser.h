#ifndef KNESER_H
#define KNESER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KnStatus {
  KN_STATUS_OK = 0,
  KN_STATUS_NULL_POINTER = 1,
  KN_STATUS_INVALID_INPUT = 2,
  KN_STATUS_RESOURCE_LIMIT = 3,
  KN_STATUS_INTERNAL = 4,
  KN_STATUS_IO = 5,
  KN_STATUS_PANIC = 6,
} KnStatus;

/**
 * A set family.
 */
typedef struct KnFamily KnFamily;

/**
 * A uniform hypergraph.
 */
typedef struct KnHypergraph KnHypergraph;

/**
 * A partition of the ground set.
 */
typedef struct KnPartition KnPartition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; valid until the next failing call.
 */
const char *kn_last_error(void);

/**
 * Library version as a static string.
 */
const char *kn_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void kn_string_free(char *s);

/**
 * Enumerates a family from a spec such as `ksubsets:n=7,k=3`.
 *
 * # Safety
 * `spec` must be a nul-terminated string and `out` writable.
 */
enum KnStatus kn_family_parse(const char *spec, struct KnFamily **out);

/**
 * Builds a family over `[n]` from JSON `{"n": .., "sets": [[..], ..]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum KnStatus kn_family_from_json(const char *json, struct KnFamily **out);

/**
 * # Safety
 * `f` must be a live family handle; `n` and `len` writable.
 */
enum KnStatus kn_family_size(const struct KnFamily *f, size_t *n, size_t *len);

/**
 * # Safety
 * `f` must be null or a handle not yet freed.
 */
void kn_family_free(struct KnFamily *f);

/**
 * Parses a partition of `[n]`: `1,2|3,4`, `singletons` or `consecutive:<size>`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum KnStatus kn_partition_parse(const char *text, size_t n, struct KnPartition **out);

/**
 * # Safety
 * `p` must be null or a handle not yet freed.
 */
void kn_partition_free(struct KnPartition *p);

/**
 * `ecd^r(F, s)`.
 *
 * # Safety
 * `f` must be a live family handle and `out` writable.
 */
enum KnStatus kn_ecd(const struct KnFamily *f, size_t r, size_t s, size_t *out);

/**
 * `ecd_S^r(F)` with one weight per ground element.
 *
 * # Safety
 * `weights` must point to `len` readable values; `f` live; `out` writable.
 */
enum KnStatus kn_ecd_s_disjoint(const struct KnFamily *f,
                                size_t r,
                                const uint32_t *weights,
                                size_t len,
                                size_t *out);

/**
 * `KG^r(F, P, s)`, or its tilde variant when `tilde` is set.
 *
 * # Safety
 * `f` and `p` must be live handles and `out` writable.
 */
enum KnStatus kn_hypergraph_kneser(const struct KnFamily *f,
                                   const struct KnPartition *p,
                                   size_t s,
                                   bool tilde,
                                   size_t r,
                                   struct KnHypergraph **out);

/**
 * Loads a hypergraph from its JSON form.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum KnStatus kn_hypergraph_from_json(const char *json, struct KnHypergraph **out);

/**
 * # Safety
 * `h` must be a live handle; `vertices` and `edges` writable.
 */
enum KnStatus kn_hypergraph_size(const struct KnHypergraph *h, size_t *vertices, size_t *edges);

/**
 * The hypergraph as JSON; release with [`kn_string_free`].
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum KnStatus kn_hypergraph_to_json(const struct KnHypergraph *h, char **out);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void kn_hypergraph_free(struct KnHypergraph *h);

/**
 * Exact chromatic number. `infinite` is set when the hypergraph has a loop,
 * in which case `value` is 0. A `node_limit` of 0 keeps the default.
 *
 * # Safety
 * `h` must be a live handle; `value` and `infinite` writable.
 */
enum KnStatus kn_chromatic_number(const struct KnHypergraph *h,
                                  uint64_t node_limit,
                                  size_t *value,
                                  bool *infinite);

/**
 * Replays the Tucker labeling for `KG^p(F, P, s)` with an optimal coloring
 * and reports whether every condition holds. `report_json`, when not null,
 * receives the full report; release it with [`kn_string_free`].
 *
 * # Safety
 * `f` and `p` must be live handles; `all_hold` writable; `report_json`
 * null or writable.
 */
enum KnStatus kn_tucker_check(const struct KnFamily *f,
                              const struct KnPartition *p,
                              size_t s,
                              size_t prime,
                              bool tilde,
                              uint64_t max_faces,
                              bool *all_hold,
                              char **report_json);

/**
 * Runs a verification suite (`formulas`, `theorems` or `all`) from a grid
 * configuration given as JSON text. `failures` counts violated proven
 * bounds; `summary_json`, when not null, receives the summary.
 *
 * # Safety
 * String arguments must be nul-terminated; `failures` writable;
 * `summary_json` null or writable.
 */
enum KnStatus kn_verify(const char *config_json,
                        const char *suite,
                        size_t *failures,
                        char **summary_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNESER_H */
