#ifndef EVOMAZE_H
#define EVOMAZE_H

/* This file is generated by cbindgen from evomaze-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by fallible functions.
 */
#define EVOMAZE_OK 0

/**
 * A pointer argument was NULL or a string was not valid UTF-8.
 */
#define EVOMAZE_ERR_ARGUMENT 1

/**
 * A settings value was out of range or inconsistent.
 */
#define EVOMAZE_ERR_CONFIG 2

/**
 * The trial itself failed (I/O, evaluation error).
 */
#define EVOMAZE_ERR_RUN 3

/**
 * An index was out of bounds for the result.
 */
#define EVOMAZE_ERR_INDEX 4

/**
 * Algorithm selector for `evomaze_settings_new`.
 */
#define EVOMAZE_ALGORITHM_GA 0

#define EVOMAZE_ALGORITHM_NS 1

#define EVOMAZE_ALGORITHM_EYAL 2

#define EVOMAZE_ALGORITHM_RS 3

/**
 * Environment selector for `evomaze_settings_new`.
 */
#define EVOMAZE_ENV_SPARSE 0

#define EVOMAZE_ENV_DECEPTIVE 1

/**
 * Finished-trial handle. Opaque; produced by `evomaze_trial_run`.
 */
typedef struct EvomazeResult EvomazeResult;

/**
 * Trial configuration handle. Opaque; create with `evomaze_settings_new`.
 */
typedef struct EvomazeSettings EvomazeSettings;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread, or an empty
 * string. Valid until the next failing call on the same thread; do not free.
 */
const char *evomaze_last_error_message(void);

/**
 * Create settings for one trial with library defaults (population 51,
 * 5e7-step budget, 256x256 hidden layers). Returns NULL on invalid selector.
 */
struct EvomazeSettings *evomaze_settings_new(int algorithm, int environment, uint64_t trial_seed);

/**
 * Release a settings handle.
 */
void evomaze_settings_free(struct EvomazeSettings *settings);

/**
 * Set the training-step budget.
 */
int evomaze_settings_set_max_steps(struct EvomazeSettings *settings, uint64_t max_steps);

/**
 * Set the initial exploration rate and its adaptation rates
 * (gamma in [0,1]; alpha and beta >= 0).
 */
int evomaze_settings_set_gamma(struct EvomazeSettings *settings,
                               double gamma0,
                               double alpha,
                               double beta);

/**
 * Set the per-component mutation noise variance.
 */
int evomaze_settings_set_sigma2(struct EvomazeSettings *settings, double sigma2);

/**
 * Set population size M and truncation size T (1 <= T <= M).
 */
int evomaze_settings_set_selection(struct EvomazeSettings *settings,
                                   uintptr_t popsize,
                                   uintptr_t truncation);

/**
 * Set the hidden-layer widths from an array of `count` sizes.
 */
int evomaze_settings_set_hidden_dims(struct EvomazeSettings *settings,
                                     const uintptr_t *dims,
                                     uintptr_t count);

/**
 * Set the number of validation episodes per generation.
 */
int evomaze_settings_set_validation_episodes(struct EvomazeSettings *settings, uintptr_t episodes);

/**
 * Stream the trial log to a CSV file at `path` (UTF-8, NUL-terminated)
 * as the trial runs. Pass NULL to disable.
 */
int evomaze_settings_set_output_csv(struct EvomazeSettings *settings, const char *path);

/**
 * Run one full trial. On success writes a result handle to `*result`
 * (release with `evomaze_result_free`) and returns `EVOMAZE_OK`.
 */
int evomaze_trial_run(const struct EvomazeSettings *settings, struct EvomazeResult **result);

/**
 * Release a result handle.
 */
void evomaze_result_free(struct EvomazeResult *result);

/**
 * Number of generations the trial ran. Returns 0 on a NULL handle.
 */
uintptr_t evomaze_result_generations(const struct EvomazeResult *result);

/**
 * Best validation score across all generations.
 */
int evomaze_result_trial_score(const struct EvomazeResult *result, double *score);

/**
 * Total training steps consumed by the trial.
 */
int evomaze_result_training_steps(const struct EvomazeResult *result, uint64_t *steps);

/**
 * Per-generation scalars for generation index `gen` (0-based). Any of the
 * output pointers may be NULL to skip that field.
 */
int evomaze_result_generation_stats(const struct EvomazeResult *result,
                                    uintptr_t gen,
                                    double *elite_fitness,
                                    double *gamma,
                                    double *validation_score,
                                    uint64_t *training_steps_used);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EVOMAZE_H */
