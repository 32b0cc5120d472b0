#ifndef HOBODY_H
#define HOBODY_H

/* Generated by cbindgen from hobody-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a fallible call.  Everything except `Ok` leaves a message in
// `hobody_last_error`.
typedef enum hobody_status {
  // The call succeeded.
  HOBODY_STATUS_OK = 0,
  // A required pointer argument was null.
  HOBODY_STATUS_NULL_ARGUMENT = 1,
  // An argument was out of range or otherwise malformed.
  HOBODY_STATUS_INVALID_ARGUMENT = 2,
  // The body is degenerate for the requested operation.
  HOBODY_STATUS_DEGENERATE = 3,
  // A numeric routine failed to converge or ran over budget.
  HOBODY_STATUS_NUMERIC = 4,
  // A panic was caught at the boundary; state is unchanged.
  HOBODY_STATUS_PANIC = 5,
} hobody_status;

// Opaque convex body handle (a polytope or an ellipsoid).
typedef struct hobody_body hobody_body;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; never free it.
const char *hobody_version(void);

// Message for the most recent failure on this thread, or null if none.
// Valid until the next failing call on the same thread; never free it.
const char *hobody_last_error(void);

// Frees a string previously returned as an owned `char *`.
//
// # Safety
// `s` must be null or a pointer obtained from this library's owned-string
// returns, not yet freed.
void hobody_string_free(char *s);

// Frees a body handle; a null handle is ignored.
//
// # Safety
// `body` must be null or a handle from a `hobody_body_*` constructor, not
// yet freed.
void hobody_body_free(struct hobody_body *body);

// Regular simplex in `R^dim` (1 <= dim <= 4) with centroid at the origin.
// Returns null on error.
struct hobody_body *hobody_body_simplex(size_t dim);

// Cube `[-1, 1]^dim` (1 <= dim <= 4).  Returns null on error.
struct hobody_body *hobody_body_cube(size_t dim);

// Cross-polytope `conv(+-e_1, ..., +-e_dim)` (1 <= dim <= 4).  Returns
// null on error.
struct hobody_body *hobody_body_cross_polytope(size_t dim);

// Regular polygon with `sides >= 3` vertices on the unit circle.  Returns
// null on error.
struct hobody_body *hobody_body_regular_polygon(size_t sides);

// Euclidean ball of the given radius in `R^dim` (1 <= dim <= 4).  Returns
// null on error.
struct hobody_body *hobody_body_ball(size_t dim, double radius);

// Convex hull of `count` points in `R^dim`, given row-major as
// `count * dim` doubles.  Returns null on error (too few points, degenerate
// hull, bad dimension).
//
// # Safety
// `coords` must point to `count * dim` readable doubles.
struct hobody_body *hobody_body_from_vertices(size_t dim, size_t count, const double *coords);

// Builds a body from a JSON spec, e.g. `{"kind":"ball","n":3}`,
// `{"kind":"simplex","n":2}` or `{"kind":"ellipsoid","semiaxes":[1.25,0.8]}`.
// The grammar matches catalog files accepted by the `hobody` CLI.  Returns
// null on error.
//
// # Safety
// `spec` must be a NUL-terminated string.
struct hobody_body *hobody_body_from_json(const char *spec);

// Ambient dimension of the body, or 0 if `body` is null.
//
// # Safety
// `body` must be null or a live handle.
size_t hobody_body_dim(const struct hobody_body *body);

// Exact volume of the body.
//
// # Safety
// `body` must be a live handle; `out` must be writable.
enum hobody_status hobody_body_volume(const struct hobody_body *body, double *out);

// Support value `h_{Pi^m K}(theta)` of the order-`m` projection body at one
// direction tuple `theta` of `m * dim(body)` doubles (blocks of length
// `dim`, listed consecutively).
//
// # Safety
// `body` must be a live handle; `theta` must point to `m * dim(body)`
// readable doubles; `out` must be writable.
enum hobody_status hobody_proj_support(const struct hobody_body *body,
                                       size_t m,
                                       const double *theta,
                                       double *out);

// m-covariogram `Vol(K cap (x_1 + K) cap ... cap (x_m + K))` of a polytope
// at one shift tuple of `m * dim(body)` doubles.  Ellipsoid handles are
// rejected.
//
// # Safety
// `body` must be a live handle; `shifts` must point to `m * dim(body)`
// readable doubles; `out` must be writable.
enum hobody_status hobody_covariogram(const struct hobody_body *body,
                                      size_t m,
                                      const double *shifts,
                                      double *out);

// Seeded Monte Carlo volume of the order-`m` difference body `D^m K` of a
// polytope.  Writes the estimate and its standard error (`out_std_error`
// may be null).  Ellipsoid handles are rejected.
//
// # Safety
// `body` must be a live handle; `out_value` must be writable;
// `out_std_error` must be writable or null.
enum hobody_status hobody_diff_body_volume(const struct hobody_body *body,
                                           size_t m,
                                           uint64_t samples,
                                           uint64_t seed,
                                           double *out_value,
                                           double *out_std_error);

// Seeded Monte Carlo estimate of the affine-invariant Petty product
// `Vol(K)^{nm-m} Vol((Pi^m K)^o)`.  Writes the estimate and its standard
// error (`out_std_error` may be null).
//
// # Safety
// `body` must be a live handle; `out_value` must be writable;
// `out_std_error` must be writable or null.
enum hobody_status hobody_petty_product(const struct hobody_body *body,
                                        size_t m,
                                        uint64_t samples,
                                        uint64_t seed,
                                        double *out_value,
                                        double *out_std_error);

// Sharp simplex lower bound `binom(nm+n, n) / n^{nm}` for the Petty
// product, or NaN for out-of-range arguments.
double hobody_simplex_product_bound(size_t n, size_t m);

// Radius `m / ((nm+1) kappa_n)` of the ball `Gamma^m (Pi^{o,m} B^n)`, or
// NaN for out-of-range arguments.
double hobody_ball_centroid_radius(size_t n, size_t m);

// Number of verification suites.
size_t hobody_suite_count(void);

// Name of the verification suite at `index`, as a static string (never free
// it), or null if `index` is out of range.
const char *hobody_suite_name(size_t index);

// Runs one verification suite with the given Monte Carlo budget
// (`samples >= 1000`) and seed.  On success writes the number of checks to
// `out_checks` and the number of failed checks to `out_failures` (either
// may be null); a suite whose checks fail still returns `Ok`.
//
// # Safety
// `name` must be a NUL-terminated string; `out_checks` and `out_failures`
// must each be writable or null.
enum hobody_status hobody_verify_suite(const char *name,
                                       uint64_t samples,
                                       uint64_t seed,
                                       size_t *out_checks,
                                       size_t *out_failures);

// Runs one verification suite and returns its report as a JSON string owned
// by the caller (free with `hobody_string_free`), or null on error.  The
// schema matches `hobody verify --format json`.
//
// # Safety
// `name` must be a NUL-terminated string.
char *hobody_verify_suite_json(const char *name, uint64_t samples, uint64_t seed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOBODY_H */
