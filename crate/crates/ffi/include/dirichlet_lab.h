#ifndef DIRICHLET_LAB_H
#define DIRICHLET_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DlabStatus {
  DLAB_STATUS_OK = 0,
  DLAB_STATUS_NULL_POINTER = 1,
  DLAB_STATUS_INVALID_UTF8 = 2,
  DLAB_STATUS_INVALID_FREQUENCY = 3,
  DLAB_STATUS_INVALID_RELATIONS = 4,
  DLAB_STATUS_AMBIGUOUS_RELATION = 5,
  DLAB_STATUS_INVALID_ABSCISSA = 6,
  DLAB_STATUS_UNDEFINED_ABSCISSA = 7,
  DLAB_STATUS_MODEL_MISMATCH = 8,
  DLAB_STATUS_INVALID_MODEL = 9,
  DLAB_STATUS_INVALID_PARAMETER = 10,
  DLAB_STATUS_INVALID_EXPONENT = 11,
  DLAB_STATUS_ACCURACY_NOT_ACHIEVED = 12,
  DLAB_STATUS_NOT_COPRIME = 13,
  DLAB_STATUS_OVERFLOW = 14,
  DLAB_STATUS_IO = 15,
  DLAB_STATUS_PARSE = 16,
  DLAB_STATUS_PANIC = 99,
} DlabStatus;

typedef enum DlabConditionKind {
  // Bohr's condition with parameters `l` and `delta`.
  DLAB_CONDITION_KIND_BOHR = 0,
  // Landau's condition with parameter `delta`.
  DLAB_CONDITION_KIND_LANDAU = 1,
  // The limsup `L(λ)`; parameters ignored.
  DLAB_CONDITION_KIND_L_VALUE = 2,
} DlabConditionKind;

typedef enum DlabVerdict {
  DLAB_VERDICT_EVIDENCE_HOLDS = 0,
  DLAB_VERDICT_EVIDENCE_FAILS = 1,
  DLAB_VERDICT_INCONCLUSIVE = 2,
} DlabVerdict;

typedef enum DlabNormMethod {
  // Monte Carlo over Haar measure; uses `samples`.
  DLAB_NORM_METHOD_HAAR = 0,
  // Average along the Kronecker flow; uses `t_max` and `step`.
  DLAB_NORM_METHOD_FLOW = 1,
} DlabNormMethod;

// A frequency `λ = (λ_n)`.
typedef struct DlabFrequency DlabFrequency;

// A torus model of the group attached to a frequency prefix.
typedef struct DlabModel DlabModel;

// A finite Dirichlet polynomial over a frequency.
typedef struct DlabPolynomial DlabPolynomial;

typedef struct DlabConditionResult {
  double witness;
  enum DlabVerdict verdict;
} DlabConditionResult;

typedef struct DlabNormResult {
  double value;
  // Monte Carlo standard error, NaN when not applicable.
  double std_error;
} DlabNormResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *dlab_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *dlab_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from a `dlab_*` function documented as returning an owned
// string, and must not be freed twice.
void dlab_string_free(char *s);

// Parses `log(n)`, `n`, `sqrt(log(n))`, `log(log(n))` or `file:<path>`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out` a valid pointer.
enum DlabStatus dlab_frequency_parse(const char *spec, struct DlabFrequency **out_freq);

// A finite frequency from `len` strictly increasing nonnegative values.
//
// # Safety
// `values` must point to `len` readable doubles and `out_freq` be valid.
enum DlabStatus dlab_frequency_explicit(const double *values,
                                        size_t len,
                                        struct DlabFrequency **out_freq);

// Writes `λ_n` (1-based) to `out_value`.
//
// # Safety
// `freq` must be a live handle and `out_value` a valid pointer.
enum DlabStatus dlab_frequency_value(const struct DlabFrequency *freq, size_t n, double *out_value);

// Evaluates a growth condition on the prefix `λ_1..λ_n`.
//
// # Safety
// `freq` must be a live handle and `out_result` a valid pointer.
enum DlabStatus dlab_frequency_check(const struct DlabFrequency *freq,
                                     enum DlabConditionKind kind,
                                     double l,
                                     double delta,
                                     size_t n,
                                     struct DlabConditionResult *out_result);

// # Safety
// `freq` must be NULL or a handle not yet freed.
void dlab_frequency_free(struct DlabFrequency *freq);

// `Σ_{n ≤ len} a_n e^{-λ_n s}` with `a_n = re[n-1] + i·im[n-1]`. `im` may be
// NULL for real coefficients. The frequency is copied.
//
// # Safety
// `freq` must be a live handle, `re` (and `im` unless NULL) must point to
// `len` doubles, and `out_poly` must be valid.
enum DlabStatus dlab_polynomial_new(const struct DlabFrequency *freq,
                                    const double *re,
                                    const double *im,
                                    size_t len,
                                    struct DlabPolynomial **out_poly);

// Value at `s = s_re + i·s_im`.
//
// # Safety
// `poly` must be a live handle; `out_re` and `out_im` must be valid.
enum DlabStatus dlab_polynomial_eval(const struct DlabPolynomial *poly,
                                     double s_re,
                                     double s_im,
                                     double *out_re,
                                     double *out_im);

// JSON form of the polynomial; release with [`dlab_string_free`].
//
// # Safety
// `poly` must be a live handle and `out_json` a valid pointer.
enum DlabStatus dlab_polynomial_to_json(const struct DlabPolynomial *poly, char **out_json);

// Poisson–Perron transform `e^{-u|x|} Σ_{λ_n < x} a_n (x − λ_n)^k`.
//
// # Safety
// `poly` must be a live handle; `out_re` and `out_im` must be valid.
enum DlabStatus dlab_perron_transform(const struct DlabPolynomial *poly,
                                      double u,
                                      double k,
                                      double x,
                                      double *out_re,
                                      double *out_im);

// # Safety
// `poly` must be NULL or a handle not yet freed.
void dlab_polynomial_free(struct DlabPolynomial *poly);

// Torus model for `λ_1..λ_n`. Relations are exact for `log(n)` and `n` and
// detected numerically with tolerance `tol` otherwise, unless
// `assume_independent` is set.
//
// # Safety
// `freq` must be a live handle and `out_model` a valid pointer.
enum DlabStatus dlab_model_new(const struct DlabFrequency *freq,
                               size_t n,
                               double tol,
                               bool assume_independent,
                               struct DlabModel **out_model);

// Torus dimension, or 0 for NULL.
//
// # Safety
// `model` must be NULL or a live handle.
size_t dlab_model_dim(const struct DlabModel *model);

// `‖f‖_p` on the model; `p = INFINITY` is allowed.
//
// # Safety
// `poly` and `model` must be live handles and `out_result` valid.
enum DlabStatus dlab_lp_norm(const struct DlabPolynomial *poly,
                             const struct DlabModel *model,
                             double p,
                             enum DlabNormMethod method,
                             size_t samples,
                             double t_max,
                             double step,
                             uint64_t seed,
                             struct DlabNormResult *out_result);

// # Safety
// `model` must be NULL or a handle not yet freed.
void dlab_model_free(struct DlabModel *model);

// Poisson kernel `P_u(t) = u / (π(u² + t²))`.
//
// # Safety
// `out_value` must be a valid pointer.
enum DlabStatus dlab_poisson(double u, double t, double *out_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIRICHLET_LAB_H */
