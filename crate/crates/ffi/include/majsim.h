#ifndef MAJSIM_H
#define MAJSIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Evolution backend selector for [`majsim_evolve_spinor`].
 */
typedef enum MajsimEvolver {
  MajsimEvolver_DiracPlus = 0,
  MajsimEvolver_DiracMinus = 1,
  MajsimEvolver_MajoranaComposed = 2,
  MajsimEvolver_MajoranaReference = 3,
} MajsimEvolver;

/**
 * Result code of every FFI call.
 */
typedef enum MajsimStatus {
  MajsimStatus_Ok = 0,
  MajsimStatus_InvalidParameter = 1,
  MajsimStatus_DegenerateInput = 2,
  MajsimStatus_ShapeMismatch = 3,
  MajsimStatus_UnsupportedBoundary = 4,
  MajsimStatus_ContractViolation = 5,
  MajsimStatus_ConfigError = 6,
  MajsimStatus_IoError = 7,
  MajsimStatus_NullPointer = 8,
  MajsimStatus_InvalidUtf8 = 9,
} MajsimStatus;

/**
 * Opaque experiment configuration: an ordered list of key = value
 * assignments resolved against the preset defaults when a run is started.
 */
typedef struct MajsimConfig MajsimConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or null if no call
 * has failed yet. The pointer stays valid until the next failing call on
 * the same thread.
 */
const char *majsim_last_error_message(void);

/**
 * Crate version as a static NUL-terminated string.
 */
const char *majsim_version(void);

/**
 * Create a config seeded from a preset name (`lowmass`, `highmass` or
 * `custom`). Returns null on error.
 *
 * # Safety
 * `preset` must be a NUL-terminated string.
 */
struct MajsimConfig *majsim_config_new(const char *preset);

/**
 * Append one key = value assignment (same keys as the CLI flags).
 *
 * # Safety
 * `config` must come from [`majsim_config_new`] and not have been freed;
 * `key` and `value` must be NUL-terminated strings.
 */
enum MajsimStatus majsim_config_set(struct MajsimConfig *config,
                                    const char *key,
                                    const char *value);

/**
 * Release a config handle. Null is ignored.
 *
 * # Safety
 * `config` must come from [`majsim_config_new`] and not be used afterwards.
 */
void majsim_config_free(struct MajsimConfig *config);

/**
 * Resolve the config and run the experiment, writing CSV and heatmap files
 * into `out_dir` exactly like `sim run`.
 *
 * # Safety
 * `config` must be a live handle; `out_dir` a NUL-terminated path string.
 */
enum MajsimStatus majsim_run_experiment(const struct MajsimConfig *config, const char *out_dir);

/**
 * Resolve the config and emit the Majoranon-vs-Dirac comparison CSV, like
 * `sim compare`.
 *
 * # Safety
 * Same contract as [`majsim_run_experiment`].
 */
enum MajsimStatus majsim_compare(const struct MajsimConfig *config, const char *out_dir);

/**
 * Pseudo-energy of the configured run at `n_zetas` strictly increasing
 * coordinates; `out` must hold `n_zetas` doubles.
 *
 * # Safety
 * `config` must be a live handle; `zetas` and `out` must point to arrays
 * of `n_zetas` doubles.
 */
enum MajsimStatus majsim_pseudo_energy_series(const struct MajsimConfig *config,
                                              const double *zetas,
                                              uintptr_t n_zetas,
                                              double *out);

/**
 * Evolve a two-component spinor over a periodic grid of `n_cells` cells.
 *
 * `psi_in` and `psi_out` hold `4 * n_cells` doubles laid out as
 * `[re ψ₁, im ψ₁] × n_cells` followed by `[re ψ₂, im ψ₂] × n_cells`.
 *
 * # Safety
 * Both arrays must hold `4 * n_cells` doubles.
 */
enum MajsimStatus majsim_evolve_spinor(enum MajsimEvolver evolver,
                                       uintptr_t n_cells,
                                       double mu,
                                       double zeta,
                                       const double *psi_in,
                                       double *psi_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAJSIM_H */
