#ifndef SPECRAD_H
#define SPECRAD_H

/* Generated by cbindgen from the specrad-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes for every fallible call.
typedef enum SrStatus {
  SR_STATUS_OK = 0,
  SR_STATUS_NULL_ARGUMENT = 1,
  SR_STATUS_INVALID_UTF8 = 2,
  SR_STATUS_CONFIG = 3,
  SR_STATUS_UNSUPPORTED = 4,
  SR_STATUS_NUMERICAL = 5,
  SR_STATUS_PARSE = 6,
  SR_STATUS_CAPACITY = 7,
  SR_STATUS_BUDGET = 8,
  SR_STATUS_IO = 9,
  SR_STATUS_PANIC = 10,
} SrStatus;

// Opaque entry-law descriptor.
typedef struct SrDist SrDist;

// Opaque matrix realization with provenance.
typedef struct SrMatrix SrMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message on this thread into `buf` (NUL-terminated,
// truncated to `cap`). Returns the full message length in bytes.
//
// # Safety
// `buf` must point to `cap` writable bytes, or be NULL (then only the
// length is returned).
size_t sr_last_error(char *buf, size_t cap);

// Parses a JSON law descriptor, e.g. `{"kind":"pareto_symmetric","alpha":2.2}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
enum SrStatus sr_dist_from_json(const char *json, struct SrDist **out);

// Serializes the descriptor back to JSON. Free the string with
// [`sr_string_free`].
//
// # Safety
// `dist` must be a live handle from this library; `out` must be valid.
enum SrStatus sr_dist_to_json(const struct SrDist *dist, char **out);

// # Safety
// `s` must have been returned by this library and not yet freed.
void sr_string_free(char *s);

// # Safety
// `dist` must be a live handle from this library (or NULL).
void sr_dist_free(struct SrDist *dist);

// `E|x|^p` in closed form; `+inf` when the moment diverges.
//
// # Safety
// `dist` must be a live handle; `out` must be valid.
enum SrStatus sr_dist_moment(const struct SrDist *dist, double p, double *out);

// Scale `c = 1/sqrt(E|x|^2)` plus the descriptor of `c*x`.
//
// # Safety
// `dist` must be a live handle; `out_scale` and `out_dist` must be valid.
enum SrStatus sr_dist_normalize(const struct SrDist *dist,
                                double *out_scale,
                                struct SrDist **out_dist);

// Draws an n×n realization. `sparse` nonzero selects triplet storage, which
// is only supported for laws with an atom at zero.
//
// # Safety
// `dist` must be a live handle; `out` must be valid.
enum SrStatus sr_matrix_sample(const struct SrDist *dist,
                               size_t n,
                               uint64_t seed,
                               int32_t sparse,
                               struct SrMatrix **out);

// # Safety
// `matrix` must be a live handle from this library (or NULL).
void sr_matrix_free(struct SrMatrix *matrix);

// Dimension of the realization; 0 for a NULL handle.
//
// # Safety
// `matrix` must be a live handle or NULL.
size_t sr_matrix_n(const struct SrMatrix *matrix);

// Entry (i, j), 0-based.
//
// # Safety
// `matrix` must be a live handle; `out_re` and `out_im` must be valid.
enum SrStatus sr_matrix_entry(const struct SrMatrix *matrix,
                              size_t i,
                              size_t j,
                              double *out_re,
                              double *out_im);

// Whether every entry modulus is at most n².
//
// # Safety
// `matrix` must be a live handle; `out` must be valid.
enum SrStatus sr_matrix_event_b(const struct SrMatrix *matrix, int32_t *out);

// Writes the realization to the binary matrix format.
//
// # Safety
// `matrix` must be a live handle; `path` must be a NUL-terminated string.
enum SrStatus sr_matrix_save(const struct SrMatrix *matrix, const char *path);

// Loads a realization from the binary matrix format.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be valid.
enum SrStatus sr_matrix_load(const char *path, struct SrMatrix **out);

// `max |lambda|` over the full spectrum (dense eigensolve).
//
// # Safety
// `matrix` must be a live handle; `out` must be valid.
enum SrStatus sr_spectral_radius(const struct SrMatrix *matrix, double *out);

// All n eigenvalues into caller-provided buffers of capacity `cap`.
// `written` receives n; fails with `SR_STATUS_CAPACITY` when `cap < n`.
//
// # Safety
// `out_re` and `out_im` must point to `cap` writable doubles; `written`
// must be valid.
enum SrStatus sr_eigenvalues(const struct SrMatrix *matrix,
                             double *out_re,
                             double *out_im,
                             size_t cap,
                             size_t *written);

// `(Tr((X*)^{k-1} X^{k-1}))^{1/(2k-2)}`, an upper bound on the radius.
//
// # Safety
// `matrix` must be a live handle; `out` must be valid.
enum SrStatus sr_trace_moment_bound(const struct SrMatrix *matrix, uint32_t k, double *out);

// `||X^m||^{1/m}` by certified power iteration.
//
// # Safety
// `matrix` must be a live handle; `out` must be valid.
enum SrStatus sr_power_norm_bound(const struct SrMatrix *matrix, uint32_t m_power, double *out);

// `(1+delta)^{-2k+2} n^{-k+1} M` with the moment `M` given as `ln M`,
// evaluated in the log domain.
//
// # Safety
// `out` must be valid.
enum SrStatus sr_markov_tail_bound_ln(uint32_t k,
                                      size_t n,
                                      double delta,
                                      double ln_moment,
                                      double *out);

// Exact census of labeled rooted even digraphs on `[n]` with 2k edges and l
// vertices, plus the count bound `n^l k^{2(k-l)+1}`.
//
// # Safety
// All out-pointers must be valid.
enum SrStatus sr_even_digraph_census(uint32_t n,
                                     uint32_t k,
                                     uint32_t l,
                                     uint64_t *out_labeled,
                                     uint64_t *out_classes,
                                     double *out_bound,
                                     int32_t *out_bound_ok);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECRAD_H */
