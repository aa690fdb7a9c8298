#ifndef FSPT_H
#define FSPT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FsptEngine {
  FSPT_ENGINE_FERMION = 0,
  FSPT_ENGINE_STATEVECTOR = 1,
} FsptEngine;

typedef enum FsptStatus {
  FSPT_STATUS_OK = 0,
  FSPT_STATUS_NULL_POINTER = 1,
  FSPT_STATUS_OUT_OF_RANGE = 2,
  FSPT_STATUS_CAPACITY = 3,
  FSPT_STATUS_NUMERIC = 4,
  FSPT_STATUS_INVALID_ARGUMENT = 5,
  FSPT_STATUS_PANIC = 6,
} FsptStatus;

/**
 * A kicked Ising chain evolving under one of the two engines.
 */
typedef struct FsptSimulator FsptSimulator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a simulator of `sites` sites in a product X eigenstate. `signs`
 * holds `sites` entries of `+1` or `-1`; NULL means all `+1`.
 *
 * # Safety
 * `signs` is NULL or points to `sites` readable bytes; `out` is a valid
 * pointer to write a handle to.
 */
enum FsptStatus fspt_simulator_new(enum FsptEngine engine,
                                   size_t sites,
                                   const int8_t *signs,
                                   struct FsptSimulator **out);

/**
 * Releases a simulator. NULL is ignored.
 *
 * # Safety
 * `sim` is NULL or a handle from [`fspt_simulator_new`] not yet freed.
 */
void fspt_simulator_free(struct FsptSimulator *sim);

/**
 * Number of sites.
 *
 * # Safety
 * `sim` is a live handle and `out` is writable.
 */
enum FsptStatus fspt_simulator_sites(const struct FsptSimulator *sim, size_t *out);

/**
 * Applies one period `F = U_ZZ(beta) U_X(alpha)`.
 *
 * # Safety
 * `sim` is a live handle.
 */
enum FsptStatus fspt_simulator_step(struct FsptSimulator *sim, double alpha, double beta);

/**
 * Probability that the leftmost `l_a` sites have even parity.
 *
 * # Safety
 * `sim` is a live handle and `out` is writable.
 */
enum FsptStatus fspt_simulator_s1_even(const struct FsptSimulator *sim, size_t l_a, double *out);

/**
 * `⟨X_site⟩`, sites counted from zero.
 *
 * # Safety
 * `sim` is a live handle and `out` is writable.
 */
enum FsptStatus fspt_simulator_x_expectation(const struct FsptSimulator *sim,
                                             size_t site,
                                             double *out);

/**
 * The π-mode quasienergy of one period at `(alpha, beta)`.
 *
 * # Safety
 * `out` is writable.
 */
enum FsptStatus fspt_pi_mode_gap(double alpha, double beta, size_t sites, double *out);

/**
 * For `G = Z_{orders[0]} × ⋯`, writes the number of static SPT classes
 * and of Floquet SPT classes.
 *
 * # Safety
 * `orders` points to `rank` readable values; the out pointers are writable.
 */
enum FsptStatus fspt_count(const size_t *orders,
                           size_t rank,
                           size_t *out_static,
                           size_t *out_floquet);

/**
 * Static description of a status code.
 */
const char *fspt_status_str(enum FsptStatus status);

/**
 * Copies the calling thread's last error message, NUL-terminated and
 * truncated to `cap` bytes, into `buf`. Returns the full message length.
 * `buf` may be NULL to query the length.
 *
 * # Safety
 * `buf` is NULL or points to `cap` writable bytes.
 */
size_t fspt_last_error(char *buf, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FSPT_H */
