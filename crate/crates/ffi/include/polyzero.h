#ifndef POLYZERO_H
#define POLYZERO_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PzStatus {
  PZ_OK = 0,
  PZ_NULL_POINTER = 1,
  PZ_INVALID_ARGUMENT = 2,
  PZ_PARSE = 3,
  PZ_NON_CONVERGENCE = 4,
  PZ_GRID_CAP = 5,
  PZ_IO = 6,
  PZ_BUFFER_TOO_SMALL = 7,
  PZ_PANIC = 8,
} PzStatus;

typedef struct PzPolynomial PzPolynomial;

typedef struct PzReport PzReport;

typedef struct PzRoots PzRoots;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after a success.
 The pointer stays valid until the next `pz_*` call on the same thread.
 */
const char *pz_last_error(void);

/*
 Builds a polynomial from `count` interleaved `(re, im)` pairs in
 ascending degree.

 # Safety
 `coeffs` must point to `2 * count` doubles and `out` must be writable.
 */
enum PzStatus pz_polynomial_new(const double *coeffs, uintptr_t count, struct PzPolynomial **out);

/*
 A member of a named family (`littlewood`, `unimodular`, `g_class`,
 `lehmer`, `power_minus_one`, `rudin_shapiro_p`, ...).

 # Safety
 `name` must be a NUL-terminated string and `out` writable.
 */
enum PzStatus pz_polynomial_family(const char *name,
                                   uintptr_t parameter,
                                   uint64_t seed,
                                   struct PzPolynomial **out);

/*
 Parses the JSON polynomial format, `{"coeffs": [[re, im], ...]}`.

 # Safety
 `json` must be a NUL-terminated string and `out` writable.
 */
enum PzStatus pz_polynomial_from_json(const char *json, struct PzPolynomial **out);

/*
 # Safety
 `p` must be a live handle or null; `out` writable.
 */
enum PzStatus pz_polynomial_degree(const struct PzPolynomial *p, uintptr_t *out);

/*
 # Safety
 `p` must come from a `pz_polynomial_*` constructor and not be used
 afterwards. Null is ignored.
 */
void pz_polynomial_free(struct PzPolynomial *p);

/*
 Aberth iteration; `tol` bounds the scaled residual of every root.

 # Safety
 `p` must be a live handle and `out` writable.
 */
enum PzStatus pz_roots_find(const struct PzPolynomial *p,
                            double tol,
                            uintptr_t max_iter,
                            struct PzRoots **out);

/*
 # Safety
 `r` must be a live handle and `out` writable.
 */
enum PzStatus pz_roots_len(const struct PzRoots *r, uintptr_t *out);

/*
 Copies the roots as `(re, im)` pairs into `buf`, which holds `cap`
 doubles. `PzBufferTooSmall` if `cap < 2 * len`.

 # Safety
 `r` must be a live handle and `buf` must hold `cap` doubles.
 */
enum PzStatus pz_roots_copy(const struct PzRoots *r, double *buf, uintptr_t cap);

/*
 # Safety
 `r` must come from `pz_roots_find` and not be used afterwards.
 */
void pz_roots_free(struct PzRoots *r);

/*
 Exact angular discrepancy of the root set.

 # Safety
 `r` must be a live handle and `out` writable.
 */
enum PzStatus pz_angular_discrepancy(const struct PzRoots *r, double *out);

/*
 Normalized `p`-norm on the unit circle, `p` finite and positive.

 # Safety
 `p` must be a live handle and `out` writable.
 */
enum PzStatus pz_p_norm(const struct PzPolynomial *p, double exponent, double *out);

/*
 Enclosure `[lo, hi]` of the sup norm on the unit circle.

 # Safety
 `p` must be a live handle; `lo` and `hi` writable.
 */
enum PzStatus pz_sup_norm(const struct PzPolynomial *p, double *lo, double *hi);

/*
 Mahler measure by quadrature.

 # Safety
 `p` must be a live handle and `out` writable.
 */
enum PzStatus pz_mahler(const struct PzPolynomial *p, double *out);

/*
 Checks every bound with the default configuration.

 # Safety
 `p` must be a live handle and `out` writable.
 */
enum PzStatus pz_certify(const struct PzPolynomial *p, struct PzReport **out);

/*
 # Safety
 `r` must be a live handle and `out` writable.
 */
enum PzStatus pz_report_hard_violations(const struct PzReport *r, uintptr_t *out);

/*
 Writes the report as NUL-terminated JSON into `buf` (`cap` bytes).
 `needed` receives the size including the terminator; a null `buf`
 with `cap == 0` just queries it.

 # Safety
 `r` must be a live handle, `buf` must hold `cap` bytes, `needed`
 writable.
 */
enum PzStatus pz_report_json(const struct PzReport *r, char *buf, uintptr_t cap, uintptr_t *needed);

/*
 # Safety
 `r` must come from `pz_certify` and not be used afterwards.
 */
void pz_report_free(struct PzReport *r);

/*
 Smallest `n >= 2` with `coefficient · log n / √n <= bound`.

 # Safety
 `out` must be writable.
 */
enum PzStatus pz_min_degree_for_radius(double coefficient, double bound, uint64_t *out);

/*
 Teeth count of the gear wheel with radius `gamma` and spacing `delta`.
 `statement_formula` selects the tooth arc formula as printed in the
 theorem instead of the chord form.

 # Safety
 `out` must be writable.
 */
enum PzStatus pz_gear_teeth(double gamma, double delta, bool statement_formula, uintptr_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYZERO_H */
