/* C interface for the cobord toolkit.
 *
 * Usage pattern:
 *
 *     CobordCtx *ctx = cobord_ctx_new();
 *     long long e;
 *     if (cobord_dt_exponent(ctx, "P3", NULL, &e) == COBORD_OK) { ... }
 *     char *json = cobord_zseries_json(ctx, "P3", NULL);
 *     if (!json) fprintf(stderr, "%s\n", cobord_last_error(ctx));
 *     cobord_string_free(json);
 *     cobord_ctx_free(ctx);
 *
 * All strings returned by *_json functions are owned by the caller and must
 * be released with cobord_string_free. Error messages from cobord_last_error
 * are owned by the context and remain valid until the next fallible call.
 */

#ifndef COBORD_H
#define COBORD_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum CobordStatus {
  COBORD_OK = 0,
  COBORD_PARSE_ERROR = 1,
  COBORD_BOUND_ERROR = 2,
  COBORD_MATH_ERROR = 3,
  COBORD_INVALID_ARGUMENT = 4,
  COBORD_VERIFY_FAILED = 5,
} CobordStatus;

/* Opaque computation context. */
typedef struct CobordCtx CobordCtx;

/* Lifecycle. */
CobordCtx *cobord_ctx_new(void);
void cobord_ctx_free(CobordCtx *ctx);

/* Configuration (defaults: order 6, nbound 3, dimbound 4, seed 1, jobs 1). */
CobordStatus cobord_ctx_set_order(CobordCtx *ctx, uint32_t order);
CobordStatus cobord_ctx_set_nbound(CobordCtx *ctx, uint32_t nbound);
CobordStatus cobord_ctx_set_dimbound(CobordCtx *ctx, uint32_t dimbound);
CobordStatus cobord_ctx_set_seed(CobordCtx *ctx, uint64_t seed);
CobordStatus cobord_ctx_set_jobs(CobordCtx *ctx, uint64_t jobs);

/* Error reporting and string ownership. */
const char *cobord_last_error(const CobordCtx *ctx);
void cobord_string_free(char *s);

/* Space expressions use the grammar of the CLI: "P3", "P2*P1",
 * "PB(P2; 0, h)", "Hyp(P1*P1; a+b)", "Bl(P3)". */

/* Chern numbers of a space, as JSON. NULL on error. */
char *cobord_chern_numbers_json(CobordCtx *ctx, const char *expr);

/* Decomposition in the basis of products of projective spaces, as JSON.
 * NULL on error. */
char *cobord_decompose_json(CobordCtx *ctx, const char *expr);

/* Degree-0 DT exponent of a 3-fold; pass a divisor expression in rel for
 * the logarithmic exponent, or NULL for the absolute one. */
CobordStatus cobord_dt_exponent(CobordCtx *ctx, const char *expr,
                                const char *rel, long long *out);

/* Z(X, q) (or Z(X/S, q) with rel) to the configured order, as JSON.
 * NULL on error. */
char *cobord_zseries_json(CobordCtx *ctx, const char *expr, const char *rel);

/* Equivariant-vertex invariant N_{n,0} for the toric corpus. */
CobordStatus cobord_vertex_ndt(CobordCtx *ctx, const char *expr, uint32_t n,
                               long long *out);

/* Blow-up double point relation check for a 3-fold. */
CobordStatus cobord_verify_blowup(CobordCtx *ctx, const char *expr);

/* Full acceptance suite; when out_report is non-NULL it receives a JSON
 * array with one entry per criterion. */
CobordStatus cobord_verify_all(CobordCtx *ctx, char **out_report);

/* Library version. */
const char *cobord_version(void);

#ifdef __cplusplus
}
#endif

#endif /* COBORD_H */
