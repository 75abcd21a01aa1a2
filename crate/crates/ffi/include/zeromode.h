#ifndef ZEROMODE_H
#define ZEROMODE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZmScheme {
  ZM_SCHEME_CENTERED = 0,
  ZM_SCHEME_PEIERLS = 1,
} ZmScheme;

typedef enum ZmStatus {
  ZM_STATUS_OK = 0,
  ZM_STATUS_NULL_POINTER = 1,
  ZM_STATUS_INVALID_ARGUMENT = 2,
  // The computation ran but a numerical or hypothesis check failed.
  ZM_STATUS_NUMERIC = 3,
  ZM_STATUS_PANIC = 4,
} ZmStatus;

// Exact bootstrap exponent sequence.
typedef struct ZmBootstrap ZmBootstrap;

// A loaded field with its optional potential and spinor.
typedef struct ZmField ZmField;

// Result of a quotient minimization.
typedef struct ZmQuotient ZmQuotient;

// Eigensolver and discretization settings for [`zm_quotient_run`].
typedef struct ZmQuotientOptions {
  double h;
  double half_width;
  enum ZmScheme scheme;
  double tol;
  uint32_t max_iter;
  uint32_t block;
  uint64_t seed;
  double shift;
} ZmQuotientOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message, NUL-terminated and
// truncated to `len` bytes. Returns the full message length (without NUL).
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t zm_last_error_message(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *zm_version(void);

// Loads a built-in field by label or a JSON field document by path.
//
// # Safety
// `source` must be a NUL-terminated string; `out_field` must be writable.
enum ZmStatus zm_field_load(const char *source, struct ZmField **out_field);

// # Safety
// `field` must be null or a handle from [`zm_field_load`] not yet freed.
void zm_field_free(struct ZmField *field);

// Evaluates `B(x)`.
//
// # Safety
// `x` and `b` must point to three doubles.
enum ZmStatus zm_field_eval(const struct ZmField *field, const double *x, double *b);

// Evaluates the vector potential `A(x)`; invalid argument if the field has none.
//
// # Safety
// `x` and `a` must point to three doubles.
enum ZmStatus zm_field_potential(const struct ZmField *field, const double *x, double *a);

// `‖B‖_p` with the default quadrature.
//
// # Safety
// `field` must be a live handle; `value` writable.
enum ZmStatus zm_field_lp_norm(const struct ZmField *field, double p, double *value);

// Defaults matching the command-line tool.
struct ZmQuotientOptions zm_quotient_options_default(void);

// Minimizes the discrete quotient for the field's potential.
//
// # Safety
// `field` and `options` must be valid; `out_result` writable.
enum ZmStatus zm_quotient_run(const struct ZmField *field,
                              const struct ZmQuotientOptions *options,
                              struct ZmQuotient **out_result);

// # Safety
// `result` must be null or a live handle from [`zm_quotient_run`].
void zm_quotient_free(struct ZmQuotient *result);

// # Safety
// `result` must be a live handle; outputs writable or null to skip.
enum ZmStatus zm_quotient_get(const struct ZmQuotient *result,
                              double *lambda_min,
                              double *delta_surrogate,
                              uint32_t *iterations);

// `‖Dψ‖/‖ψ‖` on the grid for the field's own potential and zero-mode spinor.
//
// # Safety
// `field` must be a live handle; `value` writable.
enum ZmStatus zm_zero_mode_residual(const struct ZmField *field,
                                    double h,
                                    double half_width,
                                    enum ZmScheme scheme,
                                    double *value);

// Runs the exponent bootstrap; `p` and `alpha` are integers, fractions
// (`"1/2"`) or decimals.
//
// # Safety
// Strings must be NUL-terminated; `out_run` writable.
enum ZmStatus zm_bootstrap_run(const char *p, const char *alpha, struct ZmBootstrap **out_run);

// # Safety
// `run` must be null or a live handle from [`zm_bootstrap_run`].
void zm_bootstrap_free(struct ZmBootstrap *run);

// Number of steps; the sequence has `steps + 1` entries.
//
// # Safety
// `run` must be a live handle; `steps` writable.
enum ZmStatus zm_bootstrap_steps(const struct ZmBootstrap *run, uint32_t *steps);

// Entry `k` as an exact fraction. Invalid argument when it does not fit in 64 bits.
//
// # Safety
// `run` must be a live handle; `num` and `den` writable.
enum ZmStatus zm_bootstrap_epsilon(const struct ZmBootstrap *run,
                                   uint32_t k,
                                   int64_t *num,
                                   uint64_t *den);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZEROMODE_H */
