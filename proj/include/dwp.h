#ifndef DWP_H
#define DWP_H

/*
 * C API for the double-well critical-point solver.
 *
 * The library computes and certifies the complete critical-point portrait of
 *   Pi(x) = 1/2 (1/2 ||Bx - c||^2 - d)^2 + 1/2 x^T A x - f^T x
 * (or of the reduced form g(w) = 1/2 (1/2 ||w||^2 - nu)^2 + 1/2 w^T D w
 * - psi^T w): the global minimizer set, the at-most-one local non-global
 * minimizer, and the at-most-one local maximizer.
 *
 * All functions return DWP_OK (0) on success or a nonzero error code; the
 * detailed message for the calling thread's last failure is available via
 * dwp_last_error(). Structured results cross the boundary as JSON or CSV
 * strings owned by the library; release them with dwp_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define DWP_OK 0
#define DWP_ERR_ARGUMENT 1              /* bad argument / dimension mismatch */
#define DWP_ERR_PARSE 2                 /* malformed problem file */
#define DWP_ERR_NOT_POSITIVE_DEFINITE 3 /* B^T B singular: unsupported input */
#define DWP_ERR_UNSUPPORTED 4           /* operation unavailable for this n */
#define DWP_ERR_NUMERIC 5               /* solver failed to converge/certify */
#define DWP_ERR_INTERNAL 6              /* broken invariant (library bug) */

typedef struct dwp_problem_s dwp_problem;

/* Parse a problem from a JSON file or an in-memory JSON string. The document
 * must carry "form":"general" (fields A, B, c, d, f) or "form":"reduced"
 * (fields alpha, psi, nu). On success *out owns the problem. */
int dwp_problem_from_file(const char* path, dwp_problem** out);
int dwp_problem_from_json(const char* text, dwp_problem** out);
void dwp_problem_free(dwp_problem* problem);

int dwp_problem_dim(const dwp_problem* problem, int* n_out);
/* 1 when the problem was given in general (A,B,c,d,f) form. */
int dwp_problem_is_general(const dwp_problem* problem, int* general_out);

/* Round-trip serialization of the problem as parsed. */
int dwp_problem_to_json(const dwp_problem* problem, char** json_out);

/* Solve the full portrait. grad_tol <= 0 selects the scale-based default
 * certification tolerance. The JSON report carries the global set, the two
 * optional local points, certificates and cross-check results. */
int dwp_solve(const dwp_problem* problem, double grad_tol, char** json_out);

/* Reduced data, congruence factor, lift shift and value offset. */
int dwp_reduce(const dwp_problem* problem, char** json_out);

/* CSV sample of the secular function h on [t_lo, t_hi]:
 * header t,h,h_prime,region. */
int dwp_sample_secular(const dwp_problem* problem, double t_lo, double t_hi, int count,
                       char** csv_out);

/* CSV sample of g on a uniform grid over [lo, hi]^n (n <= 2). */
int dwp_sample_surface(const dwp_problem* problem, double lo, double hi, int resolution,
                       char** csv_out);

/* Run the independent verification suite (finite differences, dense root
 * scan, grid scan) against the solver outputs. all_pass is 1 iff every check
 * passed. grad_tol <= 0 selects the default. */
int dwp_verify(const dwp_problem* problem, double grad_tol, uint64_t seed, char** json_out,
               int* all_pass);

void dwp_string_free(char* s);

/* Message for the calling thread's most recent failure ("" if none). The
 * buffer stays valid until the next failing call on the same thread. */
const char* dwp_last_error(void);

const char* dwp_version(void);

#ifdef __cplusplus
}
#endif

#endif /* DWP_H */
