/*
 * C API for the two-layer movable antenna toolkit.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible call returns a tlma_status; on failure a human-readable
 * message is available from tlma_last_error() until the next call on the
 * same thread. Handles are not thread-safe individually, but independent
 * handles may be used from different threads.
 */
#ifndef TLMA_H
#define TLMA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tlma_status {
    TLMA_OK = 0,
    TLMA_ERR_INVALID_ARGUMENT = 1,
    TLMA_ERR_PARSE = 2,
    TLMA_ERR_IO = 3,
    TLMA_ERR_NUMERIC = 4,
    TLMA_ERR_INTERNAL = 5
} tlma_status;

typedef struct tlma_config tlma_config;     /* experiment configuration */
typedef struct tlma_scenario tlma_scenario; /* one channel realization */
typedef struct tlma_result tlma_result;     /* one scheme run result */

const char* tlma_version(void);
const char* tlma_status_name(tlma_status status);
const char* tlma_last_error(void);

/* --- configuration ----------------------------------------------------- */

/* Creates a config holding the reference ("table1") defaults. */
tlma_status tlma_config_create(tlma_config** out);
void tlma_config_destroy(tlma_config* config);

/* "table1" or "desk". */
tlma_status tlma_config_apply_profile(tlma_config* config, const char* name);

/* Reads `key = value` lines; '#' starts a comment. Later tlma_config_set
 * calls override file values. */
tlma_status tlma_config_load_file(tlma_config* config, const char* path);

/* Keys match the config-file keys (see README). Lists are comma-separated. */
tlma_status tlma_config_set(tlma_config* config, const char* key, const char* value);

/* Writes the textual value of `key` into buffer (NUL-terminated). */
tlma_status tlma_config_get(const tlma_config* config, const char* key, char* buffer,
                            size_t capacity);

/* Checks geometry and parameter invariants. */
tlma_status tlma_config_validate(const tlma_config* config);

/* --- scenarios ---------------------------------------------------------- */

/* Draws the scenario of the given trial index: deterministic in
 * (seed, trial), shared by every scheme of the trial. */
tlma_status tlma_scenario_sample(const tlma_config* config, uint64_t trial,
                                 tlma_scenario** out);
tlma_status tlma_scenario_load(const char* path, tlma_scenario** out);
tlma_status tlma_scenario_save(const tlma_scenario* scenario, const char* path);
void tlma_scenario_destroy(tlma_scenario* scenario);
int tlma_scenario_num_users(const tlma_scenario* scenario);
int tlma_scenario_num_paths(const tlma_scenario* scenario);

/* --- scheme runs -------------------------------------------------------- */

/* Scheme is one of "tlma", "slma", "arraywise", "fpa", "allatonce". The
 * scenario must match the config's num_users/num_paths. Uses the single
 * sweep point of the config. */
tlma_status tlma_run_scheme(const tlma_config* config, const tlma_scenario* scenario,
                            const char* scheme, uint64_t trial, tlma_result** out);

/* Loads a stored scenario and re-runs one scheme; identical to the original
 * run for the same master seed and trial. */
tlma_status tlma_replay(const tlma_config* config, const char* scenario_path,
                        const char* scheme, uint64_t trial, tlma_result** out);

void tlma_result_destroy(tlma_result* result);
double tlma_result_sum_rate(const tlma_result* result);
double tlma_result_subarray_displacement(const tlma_result* result);
double tlma_result_antenna_displacement(const tlma_result* result);
int tlma_result_rounds(const tlma_result* result);
long long tlma_result_evaluations(const tlma_result* result);

/* Copies up to `capacity` absolute antenna positions into buffer and stores
 * the full count in *count. Call with capacity 0 to query the count. */
tlma_status tlma_result_positions(const tlma_result* result, double* buffer, size_t capacity,
                                  size_t* count);

/* Sum-rate per optimization round (first entry: initial layout). */
tlma_status tlma_result_rate_trace(const tlma_result* result, double* buffer, size_t capacity,
                                   size_t* count);

/* Per-iteration swarm trace as CSV rows
 * `call,iteration,best_fitness,best_penalty` (header included). Populated
 * when the config sets record_pso_trace = true. *needed receives the size
 * including the terminating NUL. */
tlma_status tlma_result_pso_trace_csv(const tlma_result* result, char* buffer, size_t capacity,
                                      size_t* needed);

/* Layout record {"q": [...], "d": [[...]]} (empty lists for schemes without
 * a two-layer decomposition). *needed receives the size including the
 * terminating NUL; returns TLMA_ERR_INVALID_ARGUMENT if capacity is too
 * small. */
tlma_status tlma_result_layout_json(const tlma_result* result, char* buffer, size_t capacity,
                                    size_t* needed);

/* --- sweeps ------------------------------------------------------------- */

/* Runs the configured Monte-Carlo sweep and writes the detail and aggregate
 * CSV files; the written paths are copied into the supplied buffers. */
tlma_status tlma_run_sweep(const tlma_config* config, char* detail_path, size_t detail_capacity,
                           char* aggregate_path, size_t aggregate_capacity);

/* Sum rate under optimal receive beamforming for explicit positions
 * (wavelength units). */
tlma_status tlma_sum_rate(const tlma_config* config, const tlma_scenario* scenario,
                          const double* positions, size_t count, double* out);

#ifdef __cplusplus
}
#endif

#endif /* TLMA_H */
