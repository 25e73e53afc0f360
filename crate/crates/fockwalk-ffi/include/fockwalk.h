#ifndef FOCKWALK_H
#define FOCKWALK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum FwStatus {
  /**
   * Success.
   */
  FwOk = 0,
  /**
   * A required pointer argument was null.
   */
  FwNullArgument = 1,
  /**
   * Parameters failed validation, or an index was out of range.
   */
  FwInvalidParameter = 2,
  /**
   * The run tripped the Fock-ladder truncation fault.
   */
  FwTruncation = 3,
  /**
   * The simulation failed for another reason; see fw_last_error.
   */
  FwRunFailure = 4,
} FwStatus;

/**
 * Opaque protocol parameter set.
 */
typedef struct FwParams FwParams;

/**
 * Opaque result of a protocol run: one record per step, step 0 included.
 */
typedef struct FwRun FwRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a parameter set with the library defaults (target n=6 trapping
 * protocol). Free with fw_params_free.
 */
struct FwParams *fw_params_new(void);

/**
 * Destroy a parameter set. Null is ignored.
 *
 * # Safety
 * `p` must be null or a pointer returned by fw_params_new that has not
 * been freed already.
 */
void fw_params_free(struct FwParams *p);

/**
 * Set the target Fock number; the truncation is re-derived as n+10.
 *
 * # Safety
 * `p` must be a valid pointer from fw_params_new.
 */
enum FwStatus fw_params_set_target(struct FwParams *p, uintptr_t n_target);

/**
 * Set the decay-phase duration in units of 1/gamma. Values <= 0 restore
 * the default 5/gamma_sted.
 *
 * # Safety
 * `p` must be a valid pointer from fw_params_new.
 */
enum FwStatus fw_params_set_tau_gamma(struct FwParams *p, double tau);

/**
 * Run the protocol. On success writes a run handle to `out`; free it with
 * fw_run_free.
 *
 * # Safety
 * `p` must be a valid pointer from fw_params_new and `out` a valid
 * location for one pointer.
 */
enum FwStatus fw_run(const struct FwParams *p, struct FwRun **out);

/**
 * Destroy a run handle. Null is ignored.
 *
 * # Safety
 * `r` must be null or a pointer produced by fw_run that has not been
 * freed already.
 */
void fw_run_free(struct FwRun *r);

/**
 * Number of records in the run (steps + 1; step 0 is the initial state).
 *
 * # Safety
 * `r` must be a valid pointer from fw_run; null returns 0.
 */
uintptr_t fw_run_len(const struct FwRun *r);

/**
 * Fidelity to the target Fock state at the given step.
 *
 * # Safety
 * `r` from fw_run; `out` a valid location for one double.
 */
enum FwStatus fw_run_fidelity(const struct FwRun *r, uintptr_t step, double *out);

/**
 * Ensemble standard deviation of the per-trajectory fidelity.
 *
 * # Safety
 * `r` from fw_run; `out` a valid location for one double.
 */
enum FwStatus fw_run_fidelity_std(const struct FwRun *r, uintptr_t step, double *out);

/**
 * Population above the target Fock number (broken-trapping signature).
 *
 * # Safety
 * `r` from fw_run; `out` a valid location for one double.
 */
enum FwStatus fw_run_leak(const struct FwRun *r, uintptr_t step, double *out);

/**
 * Total excited-coin population at the given step.
 *
 * # Safety
 * `r` from fw_run; `out` a valid location for one double.
 */
enum FwStatus fw_run_coin_excited(const struct FwRun *r, uintptr_t step, double *out);

/**
 * Copy the walker's photon-number distribution at `step` into `buf`
 * (capacity `len` doubles) and write the number of populated entries to
 * `written`. The distribution has n_max + 1 entries; larger buffers are
 * left untouched past the end.
 *
 * # Safety
 * `r` from fw_run; `buf` valid for `len` doubles; `written` a valid
 * location for one usize.
 */
enum FwStatus fw_run_populations(const struct FwRun *r,
                                 uintptr_t step,
                                 double *buf,
                                 uintptr_t len,
                                 uintptr_t *written);

/**
 * First step where the fidelity spread over an 11-step window drops below
 * 0.005, or -1 if the run never stabilizes.
 *
 * # Safety
 * `r` must be a valid pointer from fw_run; null returns -1.
 */
int64_t fw_run_stabilization_step(const struct FwRun *r);

/**
 * Copy the most recent error message on this thread into `buf` (capacity
 * `len` bytes, always NUL-terminated when len > 0). Returns the full
 * message length in bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must be valid for `len` bytes, or null (then only the length is
 * returned).
 */
uintptr_t fw_last_error(char *buf, uintptr_t len);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FOCKWALK_H */
