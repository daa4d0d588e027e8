#ifndef DIM_H
#define DIM_H

/* Generated by cbindgen from dim-ffi; do not edit. */

#include <stddef.h>
#include <stdint.h>

// Success; for `dim_solve`, a matching exists.
#define DIM_OK 0

// No dominating induced matching exists / the certificate is rejected.
#define DIM_NO 1

// A required pointer was null.
#define DIM_ERR_NULL -1

// Bad graph or certificate content (unknown vertex, duplicate edge, ...).
#define DIM_ERR_INPUT -2

// Text could not be parsed.
#define DIM_ERR_PARSE -3

// Bad argument, such as an unknown mode or an index out of range.
#define DIM_ERR_USAGE -4

// The solver detected an internal inconsistency.
#define DIM_ERR_INTERNAL -5

// A panic was caught at the boundary.
#define DIM_ERR_PANIC -6

#define DIM_MODE_DECIDE 0

#define DIM_MODE_MINIMIZE 1

#define DIM_MODE_MAXIMIZE 2

// A graph under construction or ready to solve.
typedef struct DimGraph DimGraph;

// A dominating induced matching returned by `dim_solve`.
typedef struct DimSolution DimSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread; empty if none.
// Valid until the next failing call on the same thread.
const char *dim_last_error(void);

// Library version as a static NUL-terminated string.
const char *dim_version(void);

// New unweighted graph with vertices `0..n` and no edges.
struct DimGraph *dim_graph_new(size_t n);

// New weighted graph with vertices `0..n`; add edges with
// `dim_graph_add_weighted_edge`.
struct DimGraph *dim_graph_new_weighted(size_t n);

// # Safety
// `g` must be null or a pointer returned by this library and not yet freed.
void dim_graph_free(struct DimGraph *g);

// # Safety
// `g` must be a live graph handle.
int32_t dim_graph_add_edge(struct DimGraph *g, size_t u, size_t v);

// Adds an edge of weight `num/den`.
//
// # Safety
// `g` must be a live graph handle.
int32_t dim_graph_add_weighted_edge(struct DimGraph *g,
                                    size_t u,
                                    size_t v,
                                    int64_t num,
                                    int64_t den);

// Parses the text format (`p dim n m`, `e u v [w]`, 1-indexed) into a
// new graph stored in `*out`.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
int32_t dim_graph_parse(const char *text, struct DimGraph **out);

// # Safety
// `g` must be a live graph handle.
size_t dim_graph_num_vertices(const struct DimGraph *g);

// # Safety
// `g` must be a live graph handle.
size_t dim_graph_num_edges(const struct DimGraph *g);

// Solves `g` in the given mode with `threads` worker threads (0 or 1
// means single-threaded). On [`DIM_OK`] `*out` holds a new solution;
// on [`DIM_NO`] or an error it is set to null.
//
// # Safety
// `g` must be a live graph handle; `out` must be writable.
int32_t dim_solve(const struct DimGraph *g, int32_t mode, size_t threads, struct DimSolution **out);

// # Safety
// `s` must be null or a pointer returned by `dim_solve` and not yet freed.
void dim_solution_free(struct DimSolution *s);

// # Safety
// `s` must be a live solution handle.
size_t dim_solution_num_edges(const struct DimSolution *s);

// Endpoints of the `i`-th matched edge, smaller id first.
//
// # Safety
// `s` must be a live solution handle; `u` and `v` must be writable.
int32_t dim_solution_edge(const struct DimSolution *s, size_t i, size_t *u, size_t *v);

// Total weight as a reduced fraction `num/den` (`den > 0`); zero in
// decide mode.
//
// # Safety
// `s` must be a live solution handle; `num` and `den` must be writable.
int32_t dim_solution_weight(const struct DimSolution *s, int64_t *num, int64_t *den);

// Checks whether the `k` edges `(us[i], vs[i])` form a dominating induced
// matching of `g`: [`DIM_OK`] if so, [`DIM_NO`] if not.
//
// # Safety
// `g` must be a live graph handle; `us` and `vs` must point to `k`
// elements each (they may be null when `k == 0`).
int32_t dim_verify(const struct DimGraph *g, const size_t *us, const size_t *vs, size_t k);

// Branching factor of the recurrence with the given `len` decrements.
//
// # Safety
// `decrements` must point to `len` values; `out` must be writable.
int32_t dim_branching_factor(const uint32_t *decrements, size_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIM_H */
