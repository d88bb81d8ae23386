#ifndef BPK_H
#define BPK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BpkStatus {
  BPK_STATUS_OK = 0,
  BPK_STATUS_NULL_POINTER = 1,
  BPK_STATUS_DOMAIN = 2,
  BPK_STATUS_INVALID_ARGUMENT = 3,
  BPK_STATUS_DEGENERATE = 4,
  BPK_STATUS_CONVERGENCE = 5,
  BPK_STATUS_PRECONDITION = 6,
  BPK_STATUS_NOT_FOUND = 7,
  BPK_STATUS_PARSE = 8,
  BPK_STATUS_INTEGRITY = 9,
  BPK_STATUS_IO = 10,
  BPK_STATUS_PANIC = 11,
} BpkStatus;

// Opaque coefficient database.
typedef struct BpkDatabase BpkDatabase;

// Opaque Fourier-Bessel expansion.
typedef struct BpkSeries BpkSeries;

// One database row. `method` is 0 for quadrature, 1 for extended-precision
// quadrature, 2 for the asymptotic formula.
typedef struct BpkCoeffRecord {
  uint32_t q;
  uint32_t m;
  uint32_t n;
  uint32_t p;
  double c000;
  double c110;
  double d111;
  double abs_err;
  uint32_t method;
} BpkCoeffRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL.
// The pointer stays valid until the next failing call on the same thread.
const char *bpk_last_error(void);

// Static name of a status code; unknown codes map to "unknown status".
const char *bpk_status_name(int32_t status);

// `Z_n(scale * x)` with `Z_n = a J_n + b Y_n`.
//
// # Safety
// `out` must be NULL or point to writable storage for one `double`.
enum BpkStatus bpk_z_eval(int32_t n, double a, double b, double scale, double x, double *out);

// `d/dx Z_n(scale * x)`.
//
// # Safety
// `out` must be NULL or point to writable storage for one `double`.
enum BpkStatus bpk_z_derivative(int32_t n, double a, double b, double scale, double x, double *out);

// The `p`-th positive zero of `J_q`, `p >= 1`.
//
// # Safety
// `out` must be NULL or point to writable storage for one `double`.
enum BpkStatus bpk_bessel_zero(uint32_t q, uint32_t p, double *out);

// `∫ x^power Π J_{orders[i]}(scales[i] x) dx` on `[lo, hi]` for
// `count` in 1..=3 first-kind factors.
//
// # Safety
// `orders` and `scales` must point to `count` readable elements;
// `value` and `abs_err` to one writable `double` each (`abs_err` may be NULL).
enum BpkStatus bpk_j_product_integral(int32_t power,
                                      size_t count,
                                      const int32_t *orders,
                                      const double *scales,
                                      double lo,
                                      double hi,
                                      double *value,
                                      double *abs_err);

// `∫₀¹ x J_0(j_{1,m}x) J_0(j_{1,n}x) J_0(j_{1,p}x) dx` by quadrature.
//
// # Safety
// `out` must be NULL or point to writable storage for one `double`.
enum BpkStatus bpk_c000(uint32_t m, uint32_t n, uint32_t p, double *out);

// Large-mode approximation of the triple product with orders `i, j, k`
// at zeros of `J_q`.
//
// # Safety
// `out` must be NULL or point to writable storage for one `double`.
enum BpkStatus bpk_triple_approx(uint32_t m,
                                 uint32_t n,
                                 uint32_t p,
                                 uint8_t i,
                                 uint8_t j,
                                 uint8_t k,
                                 uint8_t q,
                                 double *out);

// Fresnel integrals `C(t)` and `S(t)` for `t >= 0`.
//
// # Safety
// `c` and `s` must be NULL or point to writable storage for one `double`.
enum BpkStatus bpk_fresnel(double t, double *c, double *s);

// Generates every canonical triple up to `max_mode` at zeros of `J_q`.
// Triples above `asymptotic_above` use the asymptotic formula.
//
// # Safety
// `out` must point to writable storage for one handle pointer.
enum BpkStatus bpk_db_generate(uint32_t max_mode,
                               uint32_t q,
                               uint32_t asymptotic_above,
                               struct BpkDatabase **out);

// Loads a database from CSV.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must point to writable
// storage for one handle pointer.
enum BpkStatus bpk_db_import_csv(const char *path, struct BpkDatabase **out);

// Writes the database as CSV.
//
// # Safety
// `db` must be a live handle; `path` a NUL-terminated string.
enum BpkStatus bpk_db_export_csv(const struct BpkDatabase *db, const char *path);

// Writes the sorted binary index.
//
// # Safety
// `db` must be a live handle; `path` a NUL-terminated string.
enum BpkStatus bpk_db_export_binary(const struct BpkDatabase *db, const char *path);

// Number of stored records, 0 for NULL.
//
// # Safety
// `db` must be NULL or a live handle.
size_t bpk_db_len(const struct BpkDatabase *db);

// Looks up `(m, n, p)` in any order; `c110` refers to the requested order.
//
// # Safety
// `db` must be a live handle; `out` must point to one writable record.
enum BpkStatus bpk_db_lookup(const struct BpkDatabase *db,
                             uint32_t q,
                             uint32_t m,
                             uint32_t n,
                             uint32_t p,
                             struct BpkCoeffRecord *out);

// Releases a database handle. NULL is ignored.
//
// # Safety
// `db` must be NULL or a handle not yet freed.
void bpk_db_free(struct BpkDatabase *db);

// Expands `J_j(j_{i,m}x) J_k(j_{i,n}x)` in `terms` modes `J_i(j_{i,p}x)`.
//
// # Safety
// `out` must point to writable storage for one handle pointer.
enum BpkStatus bpk_expand(uint8_t i,
                          uint8_t j,
                          uint8_t k,
                          uint32_t m,
                          uint32_t n,
                          size_t terms,
                          struct BpkSeries **out);

// Number of coefficients, 0 for NULL.
//
// # Safety
// `series` must be NULL or a live handle.
size_t bpk_series_len(const struct BpkSeries *series);

// Copies up to `len` coefficients `c_1, c_2, ...` into `buf`.
//
// # Safety
// `series` must be a live handle; `buf` must hold `len` doubles.
enum BpkStatus bpk_series_coefficients(const struct BpkSeries *series, double *buf, size_t len);

// Partial sum of the expansion at `x`.
//
// # Safety
// `series` must be a live handle; `out` one writable `double`.
enum BpkStatus bpk_series_eval(const struct BpkSeries *series, double x, double *out);

// Releases a series handle. NULL is ignored.
//
// # Safety
// `series` must be NULL or a handle not yet freed.
void bpk_series_free(struct BpkSeries *series);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BPK_H */
