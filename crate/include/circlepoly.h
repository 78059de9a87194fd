#ifndef CIRCLEPOLY_H
#define CIRCLEPOLY_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or unknown fields.
   */
  CP_STATUS_PARSE_ERROR = 3,
  /**
   * Well-formed input that does not describe a valid object.
   */
  CP_STATUS_INVALID_INPUT = 4,
  /**
   * The operation needs inputs that pass every check.
   */
  CP_STATUS_VALIDATION_FAILED = 5,
  CP_STATUS_GEOMETRY_ERROR = 6,
  CP_STATUS_PANIC = 7,
} CpStatus;

/**
 * An orientation-preserving Moebius map.
 */
typedef struct CpMap CpMap;

/**
 * A circle polyhedron with its validation report.
 */
typedef struct CpPolyhedron CpPolyhedron;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * call into this library on the same thread.
 */
const char *cp_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void cp_string_free(char *s);

/**
 * Reads a circle polyhedron file. The handle is produced whenever the
 * circles assemble, even if some checks fail; see `cp_polyhedron_is_valid`.
 *
 * # Safety
 * `json` is a NUL-terminated string and `out` is writable.
 */
enum CpStatus cp_polyhedron_from_json(const char *json, double tol, struct CpPolyhedron **out);

/**
 * Dual circle polyhedron of a fixture given as JSON, for example
 * `{"kind": "cube", "a": 0.8}`.
 *
 * # Safety
 * `fixture` is a NUL-terminated string and `out` is writable.
 */
enum CpStatus cp_polyhedron_from_fixture(const char *fixture,
                                         uint64_t seed,
                                         double tol,
                                         struct CpPolyhedron **out);

/**
 * # Safety
 * `p` is null or a live handle from this library.
 */
void cp_polyhedron_free(struct CpPolyhedron *p);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `p` is null or a live handle.
 */
size_t cp_polyhedron_vertex_count(const struct CpPolyhedron *p);

/**
 * Whether every validation check passed.
 *
 * # Safety
 * `p` is null or a live handle.
 */
bool cp_polyhedron_is_valid(const struct CpPolyhedron *p);

/**
 * The validation report as JSON; free with `cp_string_free`.
 *
 * # Safety
 * `p` is a live handle and `out` is writable.
 */
enum CpStatus cp_polyhedron_report(const struct CpPolyhedron *p, char **out);

/**
 * The circle polyhedron in file format; free with `cp_string_free`.
 *
 * # Safety
 * `p` is a live handle and `out` is writable.
 */
enum CpStatus cp_polyhedron_to_json(const struct CpPolyhedron *p, char **out);

/**
 * Image of a circle polyhedron under a map, revalidated.
 *
 * # Safety
 * `p` and `map` are live handles and `out` is writable.
 */
enum CpStatus cp_polyhedron_transformed(const struct CpPolyhedron *p,
                                        const struct CpMap *map,
                                        struct CpPolyhedron **out);

/**
 * The c-link at a vertex as JSON: `{"proper": bool, "properness": ...,
 * "polygon": ... | null}`. An improper link is not an error.
 *
 * # Safety
 * `p` is a live handle and `out` is writable.
 */
enum CpStatus cp_polyhedron_link(const struct CpPolyhedron *p, size_t vertex, char **out);

/**
 * Map `z -> (az + b) / (cz + d)` from `coeffs = [re a, im a, re b, im b,
 * re c, im c, re d, im d]`.
 *
 * # Safety
 * `coeffs` points to 8 doubles and `out` is writable.
 */
enum CpStatus cp_map_new(const double *coeffs, struct CpMap **out);

/**
 * A random map drawn from `seed`.
 *
 * # Safety
 * `out` is writable.
 */
enum CpStatus cp_map_random(uint64_t seed, struct CpMap **out);

/**
 * Writes the normalized coefficients (`ad - bc = 1`) in the layout of
 * `cp_map_new`.
 *
 * # Safety
 * `map` is a live handle and `out` points to 8 writable doubles.
 */
enum CpStatus cp_map_coefficients(const struct CpMap *map, double *out);

/**
 * # Safety
 * `m` is null or a live handle from this library.
 */
void cp_map_free(struct CpMap *m);

/**
 * Decides whether a Moebius map carries `a` onto `b`. Both must be valid.
 * `map_out` receives the map when congruent and null otherwise;
 * `report_out` receives the JSON report. Either may be null.
 *
 * # Safety
 * `a` and `b` are live handles, `congruent` is writable, and the optional
 * outputs are null or writable.
 */
enum CpStatus cp_congruence(const struct CpPolyhedron *a,
                            const struct CpPolyhedron *b,
                            double tol,
                            bool *congruent,
                            struct CpMap **map_out,
                            char **report_out);

/**
 * Inversive distance of two oriented circles given as caps
 * `[x, y, z, radius]` with center direction `(x, y, z)`.
 *
 * # Safety
 * `a` and `b` point to 4 doubles and `out` is writable.
 */
enum CpStatus cp_inv_dist_caps(const double *a, const double *b, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CIRCLEPOLY_H */
