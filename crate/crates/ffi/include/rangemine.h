#ifndef RANGEMINE_H
#define RANGEMINE_H

/* Generated from the rangemine-ffi crate; edit the Rust source, not this file. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Scalar-threshold language: atoms `y > s` and `y <= s`. Point data only.
#define RM_LANGUAGE_NUM 0

// Containment language: patterns state `within ]l, r]`.
#define RM_LANGUAGE_C 1

// Intersection language: patterns state `intersects` / `contains`.
#define RM_LANGUAGE_I 2

// Product of the containment and intersection languages.
#define RM_LANGUAGE_IC 3

// Outcome of a fallible call. Anything but `OK` leaves a message
// retrievable through `rm_last_error` on the calling thread.
typedef enum {
  // The call succeeded.
  RM_STATUS_OK = 0,
  // A required pointer argument was null.
  RM_STATUS_NULL_POINTER = 1,
  // An argument violated the documented contract.
  RM_STATUS_INVALID_ARGUMENT = 2,
  // The data itself cannot be processed (bad cell, mixed kinds, ...).
  RM_STATUS_DATA = 3,
  // An index was past the end of the collection it addresses.
  RM_STATUS_OUT_OF_RANGE = 4,
  // The caller's buffer is shorter than the result; the required
  // length was written to the length out-pointer.
  RM_STATUS_BUFFER_TOO_SMALL = 5,
  // An internal invariant failed; the handle should be freed.
  RM_STATUS_PANIC = 6,
} RmStatus;

// The closed patterns mined from a dataset, ordered by descending
// support, ties by ascending intent.
typedef struct RmConcepts RmConcepts;

// An encoded dataset: the item vocabulary of a table under one pattern
// language plus one itemset per row.
typedef struct RmDataset RmDataset;

// An input table under construction: named columns of equal length whose
// cells are points, intervals, or distributions.
typedef struct RmTable RmTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message describing this thread's most recent failure, or null if
// the last call on this thread succeeded. The pointer stays valid until
// the next call into the library from the same thread.
const char *rm_last_error(void);

// The library version as a static string; do not free it.
const char *rm_version(void);

// Free a string returned by this library. Null is ignored.
void rm_string_free(char *s);

// Create an empty table. Free it with `rm_table_free`.
RmTable *rm_table_new(void);

// Free a table. Null is ignored.
void rm_table_free(RmTable *table);

// Number of rows in the table (0 for null or empty).
size_t rm_table_row_count(const RmTable *table);

// Number of columns in the table (0 for null).
size_t rm_table_column_count(const RmTable *table);

// Append a column of scalar measurements. All columns of a table must
// have the same length, and column names must be unique.
RmStatus rm_table_add_point_column(RmTable *table,
                                   const char *name,
                                   const double *values,
                                   size_t len);

// Append a column of half-open intervals `]lo[i], hi[i]]`; each lower
// bound must be strictly below its upper bound.
RmStatus rm_table_add_interval_column(RmTable *table,
                                      const char *name,
                                      const double *lo,
                                      const double *hi,
                                      size_t len);

// Append a column of normal distributions `N(mu[i], sigma[i])`; every
// sigma must be positive.
RmStatus rm_table_add_normal_column(RmTable *table,
                                    const char *name,
                                    const double *mu,
                                    const double *sigma,
                                    size_t len);

// Append a column of discrete distributions, each row a uniform mass
// over its own list of points. Row `i` takes
// `points[offsets[i] .. offsets[i+1]]`; `offsets` has `len + 1` entries
// starting at 0, non-decreasing, ending at the total number of points,
// and every row needs at least one point.
RmStatus rm_table_add_discrete_column(RmTable *table,
                                      const char *name,
                                      const double *points,
                                      size_t n_points,
                                      const size_t *offsets,
                                      size_t len);

// Encode a table into an itemset dataset.
//
// Every variable gets an equal-width grid of `bins` cells over its
// observed range. `language` is one of the `RM_LANGUAGE_*` constants.
// For distribution-valued columns, pass one or more alpha levels in
// `]0, 0.5[`; each level contributes its own interval per row. Leave
// `alphas` empty for point or interval data. On success `*out` owns the
// dataset; free it with `rm_dataset_free`.
RmStatus rm_dataset_encode(const RmTable *table,
                           uint32_t language,
                           size_t bins,
                           const double *alphas,
                           size_t n_alphas,
                           RmDataset **out);

// Free a dataset. Null is ignored.
void rm_dataset_free(RmDataset *dataset);

// Number of objects (rows) in the dataset (0 for null).
size_t rm_dataset_object_count(const RmDataset *dataset);

// Number of items in the dataset's vocabulary (0 for null).
size_t rm_dataset_item_count(const RmDataset *dataset);

// Item ids of one object's itemset, ascending; same two-call protocol
// as `rm_concepts_extent`.
RmStatus rm_dataset_object_items(const RmDataset *dataset,
                                 size_t object,
                                 uint32_t *buf,
                                 size_t cap,
                                 size_t *out_len);

// The atom behind one item id, e.g. `len > 2.38`, as a fresh string in
// `*out`; free it with `rm_string_free`.
RmStatus rm_dataset_item_text(const RmDataset *dataset, size_t item, char **out);

// Decode an arbitrary itemset into the per-variable range statements it
// expresses, as a fresh string in `*out`; free it with `rm_string_free`.
// Fails if the ids do not form the maximal representation of a pattern.
RmStatus rm_dataset_interpret_items(const RmDataset *dataset,
                                    const uint32_t *items,
                                    size_t n_items,
                                    char **out);

// Mine every closed pattern with at least `min_support` supporting
// objects (`min_support >= 1`). On success `*out` owns the result; free
// it with `rm_concepts_free`.
RmStatus rm_mine(const RmDataset *dataset, size_t min_support, RmConcepts **out);

// Free a mining result. Null is ignored.
void rm_concepts_free(RmConcepts *concepts);

// Number of mined patterns (0 for null).
size_t rm_concepts_count(const RmConcepts *concepts);

// Support (number of objects) of one pattern, written to `*out`.
RmStatus rm_concepts_support(const RmConcepts *concepts, size_t index, size_t *out);

// Object ids supporting one pattern, ascending. Call with a null `buf`
// to learn the length through `*out_len`, then with a buffer of at
// least that capacity to receive the ids.
RmStatus rm_concepts_extent(const RmConcepts *concepts,
                            size_t index,
                            uint32_t *buf,
                            size_t cap,
                            size_t *out_len);

// Item ids of one pattern's closed itemset, ascending; same two-call
// protocol as `rm_concepts_extent`.
RmStatus rm_concepts_intent(const RmConcepts *concepts,
                            size_t index,
                            uint32_t *buf,
                            size_t cap,
                            size_t *out_len);

// The range statements one pattern expresses, one per constrained
// variable, `; `-joined (`always` for the unconstrained pattern), as a
// fresh string in `*out`; free it with `rm_string_free`.
RmStatus rm_concepts_interpretation(const RmConcepts *concepts, size_t index, char **out);

// The interval a normal distribution occupies at confidence level
// `alpha` in `]0, 0.5[`: `]q(alpha), q(1 - alpha)]`, written to
// `*out_lo` / `*out_hi`.
RmStatus rm_normal_interval(double mu, double sigma, double alpha, double *out_lo, double *out_hi);

// The interval a uniform mass over `points` occupies at confidence
// level `alpha` in `]0, 0.5[`; same convention as `rm_normal_interval`.
RmStatus rm_discrete_interval(const double *points,
                              size_t n_points,
                              double alpha,
                              double *out_lo,
                              double *out_hi);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RANGEMINE_H */
