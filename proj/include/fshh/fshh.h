/*
 * fshh: fractional stochastic Hodgkin-Huxley simulation library, C API.
 *
 * Conventions
 *   - Every fallible call returns an fshh_status. On failure the message is
 *     available from fshh_last_error() on the calling thread until the next
 *     failing call on that thread.
 *   - Objects are opaque handles created by fshh_*_new / producing calls and
 *     released with the matching fshh_*_free. Free functions accept NULL.
 *   - Pointers returned by accessors stay valid until the owning handle is
 *     freed.
 *   - State vectors are ordered (m, h, n, V).
 *   - Units: ms, mV, uA/cm^2, mS/cm^2, uF/cm^2.
 */
#ifndef FSHH_FSHH_H
#define FSHH_FSHH_H

#include <stddef.h>
#include <stdint.h>

#if defined(FSHH_BUILDING_LIBRARY)
#define FSHH_API __attribute__((visibility("default")))
#else
#define FSHH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fshh_status {
  FSHH_OK = 0,
  FSHH_ERR_INVALID_ARGUMENT = 1,
  FSHH_ERR_NUMERICAL = 2,
  FSHH_ERR_EMBEDDING = 3,
  FSHH_ERR_VIABILITY = 4,
  FSHH_ERR_IO = 5,
  FSHH_ERR_USAGE = 6,
  FSHH_ERR_INTERNAL = 99
} fshh_status;

typedef enum fshh_generator { FSHH_WOOD_CHAN = 0, FSHH_CHOLESKY = 1 } fshh_generator;

typedef enum fshh_clamp_policy {
  FSHH_CLAMP_AND_LOG = 0,
  FSHH_ERROR_ON_EXIT = 1
} fshh_clamp_policy;

typedef enum fshh_regime { FSHH_REST = 0, FSHH_SINGLE = 1, FSHH_MULTIPLE = 2 } fshh_regime;

FSHH_API const char* fshh_last_error(void);
FSHH_API const char* fshh_status_string(fshh_status status);
FSHH_API const char* fshh_version(void);

/* ---------------------------------------------------------------- params */

typedef struct fshh_params {
  double capacitance;
  double current;
  double e_na, e_k, e_l;
  double gbar_na, gbar_k, gbar_l;
  double sigma[3];
} fshh_params;

/* Table values (C = 1, I = 10, E = 115/-12/10.6, gbar = 120/36/0.3), no noise. */
FSHH_API void fshh_params_default(fshh_params* out);

typedef struct fshh_solver_config {
  double horizon; /* T */
  double dt;
  double hurst;
  uint64_t seed;
  fshh_clamp_policy clamp_policy;
  fshh_generator generator;
} fshh_solver_config;

/* T = 50, dt = 0.01, H = 0.75, seed 0, clamp_and_log, wood_chan. */
FSHH_API void fshh_solver_config_default(fshh_solver_config* out);

/* ------------------------------------------------------- gating kinetics */

/* out = {alpha_m, beta_m, alpha_h, beta_h, alpha_n, beta_n} */
FSHH_API fshh_status fshh_rates(double v, double out[6]);
FSHH_API fshh_status fshh_drift(const double x[4], const fshh_params* params, double out[4]);
/* Row-major 4x3. */
FSHH_API fshh_status fshh_diffusion(const double x[4], const fshh_params* params, double out[12]);
FSHH_API fshh_status fshh_equilibrium(double v, double out[4]);

/* ------------------------------------------------------------------- fBm */

FSHH_API fshh_status fshh_fbm_covariance(double s, double t, double hurst, double* out);

typedef struct fshh_driver fshh_driver;

/* Three independent fBm copies on steps+1 grid points over [0, horizon]. */
FSHH_API fshh_status fshh_driver_sample(size_t steps, double horizon, double hurst,
                                        uint64_t master_seed, fshh_generator generator,
                                        fshh_driver** out);
FSHH_API void fshh_driver_free(fshh_driver* driver);
FSHH_API size_t fshh_driver_points(const fshh_driver* driver);
/* component in {0,1,2}; NULL if out of range. */
FSHH_API const double* fshh_driver_values(const fshh_driver* driver, int component);
FSHH_API fshh_status fshh_driver_write_csv(const fshh_driver* driver, const char* path);

/* ------------------------------------------------------------- viability */

typedef struct fshh_viability_options {
  /* Constant added to every entry of the voltage row of sigma. */
  double sigma_row4;
  /* Constant added to the gate diagonal of sigma (breaks boundary vanishing). */
  double sigma_boundary_offset;
} fshh_viability_options;

typedef struct fshh_viability_report fshh_viability_report;

/* options may be NULL. Uses the standard boundary sampling plan. */
FSHH_API fshh_status fshh_check_viability(const fshh_params* params,
                                          const fshh_viability_options* options,
                                          fshh_viability_report** out);
FSHH_API void fshh_viability_report_free(fshh_viability_report* report);
FSHH_API size_t fshh_viability_points_checked(const fshh_viability_report* report);
FSHH_API double fshh_viability_max_drift_violation(const fshh_viability_report* report);
FSHH_API double fshh_viability_max_diffusion_violation(const fshh_viability_report* report);
FSHH_API int fshh_viability_pass(const fshh_viability_report* report);
/* Returns 0 when no point was recorded. */
FSHH_API int fshh_viability_worst_point(const fshh_viability_report* report, double out[4]);
/* key = value lines. */
FSHH_API const char* fshh_viability_report_text(const fshh_viability_report* report);

FSHH_API fshh_status fshh_apriori_voltage_bound(const fshh_params* params, const double x0[4],
                                                double horizon, double* bound,
                                                double* log_bound);

/* ---------------------------------------------------------------- solver */

typedef struct fshh_result fshh_result;

FSHH_API fshh_status fshh_simulate(const double x0[4], const fshh_params* params,
                                   const fshh_solver_config* config, fshh_result** out);
FSHH_API fshh_status fshh_simulate_deterministic(const double x0[4], const fshh_params* params,
                                                 const fshh_solver_config* config,
                                                 fshh_result** out);
FSHH_API void fshh_result_free(fshh_result* result);
FSHH_API size_t fshh_result_points(const fshh_result* result);
FSHH_API const double* fshh_result_times(const fshh_result* result);
/* points x 4, row-major (m, h, n, V). */
FSHH_API const double* fshh_result_states(const fshh_result* result);
FSHH_API size_t fshh_result_clamp_count(const fshh_result* result);
FSHH_API fshh_status fshh_result_clamp_event(const fshh_result* result, size_t index,
                                             size_t* step, int* coord, double* pre_value);
FSHH_API double fshh_result_max_abs_v(const fshh_result* result);
FSHH_API double fshh_result_apriori_bound(const fshh_result* result);
FSHH_API double fshh_result_log_apriori_bound(const fshh_result* result);
FSHH_API int fshh_result_bound_respected(const fshh_result* result);
FSHH_API uint64_t fshh_result_driver_seed(const fshh_result* result);
FSHH_API void fshh_result_pre_clamp_range(const fshh_result* result, double* min_gate,
                                          double* max_gate);
FSHH_API fshh_status fshh_result_write_csv(const fshh_result* result, const char* path);
FSHH_API fshh_status fshh_result_write_clamp_csv(const fshh_result* result, const char* path);
FSHH_API fshh_status fshh_result_write_svg(const fshh_result* result, const char* path);

/* Single explicit Euler step with the clamp policy applied. */
FSHH_API fshh_status fshh_step_euler(const double x[4], double dt, const double db[3],
                                     const fshh_params* params, fshh_clamp_policy policy,
                                     double out[4]);

typedef struct fshh_convergence fshh_convergence;

FSHH_API fshh_status fshh_convergence_probe(const double x0[4], const fshh_params* params,
                                            double horizon, double hurst, uint64_t seed,
                                            const double* dt_list, size_t count,
                                            fshh_convergence** out);
FSHH_API void fshh_convergence_free(fshh_convergence* table);
FSHH_API size_t fshh_convergence_rows(const fshh_convergence* table);
FSHH_API fshh_status fshh_convergence_row(const fshh_convergence* table, size_t index, double* dt,
                                          double* gap_to_finest, double* gap_to_next);
FSHH_API double fshh_convergence_order(const fshh_convergence* table);

/* -------------------------------------------------------------- analysis */

typedef struct fshh_spike_options {
  double threshold;  /* mV */
  double refractory; /* ms */
} fshh_spike_options;

/* threshold 50 mV, refractory 2 ms. */
FSHH_API void fshh_spike_options_default(fshh_spike_options* out);

/* spike_times may be NULL; otherwise capacity entries are filled. */
FSHH_API fshh_status fshh_detect_spikes(const fshh_result* result,
                                        const fshh_spike_options* options, size_t* count,
                                        double* spike_times, size_t capacity);

typedef struct fshh_sweep fshh_sweep;

FSHH_API fshh_status fshh_bifurcation_sweep(const double* currents, size_t count,
                                            const fshh_params* params,
                                            const fshh_solver_config* config,
                                            const fshh_spike_options* spikes, double v0,
                                            fshh_sweep** out);
FSHH_API void fshh_sweep_free(fshh_sweep* sweep);
FSHH_API size_t fshh_sweep_rows(const fshh_sweep* sweep);
FSHH_API fshh_status fshh_sweep_row(const fshh_sweep* sweep, size_t index, double* current,
                                    size_t* spike_count);
/* Return 0 when no current in the sweep gave 0 (resp. 1) spikes. */
FSHH_API int fshh_sweep_rest_threshold(const fshh_sweep* sweep, double* out);
FSHH_API int fshh_sweep_single_threshold(const fshh_sweep* sweep, double* out);
FSHH_API fshh_status fshh_sweep_write_csv(const fshh_sweep* sweep, const char* path);

typedef struct fshh_regularity {
  double exponent;
  double slope;
  size_t scales_used;
  double fit_residual;
} fshh_regularity;

FSHH_API fshh_status fshh_estimate_holder(const double* values, size_t count, double dt,
                                          size_t max_log2_lag, fshh_regularity* out);
/* coordinate: 0 = m, 1 = h, 2 = n, 3 = V */
FSHH_API fshh_status fshh_result_regularity(const fshh_result* result, int coordinate,
                                            size_t max_log2_lag, fshh_regularity* out);

typedef struct fshh_series_options {
  size_t ensemble;
  int coordinate;
  size_t max_log2_lag;
  double v0;
} fshh_series_options;

/* ensemble 20, coordinate n, max_log2_lag 4, v0 0. */
FSHH_API void fshh_series_options_default(fshh_series_options* out);

typedef struct fshh_series fshh_series;

FSHH_API fshh_status fshh_recording_series(const double* hurst, size_t count,
                                           const fshh_params* params,
                                           const fshh_solver_config* config,
                                           const fshh_series_options* options,
                                           fshh_series** out);
FSHH_API void fshh_series_free(fshh_series* series);
FSHH_API size_t fshh_series_recordings(const fshh_series* series);
FSHH_API fshh_status fshh_series_recording(const fshh_series* series, size_t index,
                                           double* hurst, double* median_exponent,
                                           double* median_residual);
FSHH_API fshh_status fshh_series_write_csv(const fshh_series* series, const char* path);

/* Windowed regime labels of a result. labels may be NULL; otherwise
 * capacity entries are filled. */
FSHH_API fshh_status fshh_classify_windows(const fshh_result* result,
                                           const fshh_spike_options* spikes, double window,
                                           size_t* count, fshh_regime* labels, size_t capacity);
FSHH_API const char* fshh_regime_name(fshh_regime regime);

/* ---------------------------------------------------------------- config */

typedef struct fshh_config fshh_config;

/* All keys at their defaults (`out` unset). */
FSHH_API fshh_config* fshh_config_new(void);
FSHH_API void fshh_config_free(fshh_config* config);
FSHH_API fshh_status fshh_config_load(const char* path, fshh_config** out);
FSHH_API fshh_status fshh_config_parse(const char* text, fshh_config** out);
FSHH_API fshh_status fshh_config_set(fshh_config* config, const char* key, const char* value);
FSHH_API int fshh_config_has(const fshh_config* config, const char* key);
/* Value text, valid until the next call on this config. NULL when unset. */
FSHH_API const char* fshh_config_get(const fshh_config* config, const char* key);
/* Serialized text, valid until the next call on this config. */
FSHH_API const char* fshh_config_serialize(const fshh_config* config);
FSHH_API fshh_status fshh_config_save(const fshh_config* config, const char* path);
FSHH_API fshh_status fshh_config_params(const fshh_config* config, fshh_params* out);
FSHH_API fshh_status fshh_config_solver(const fshh_config* config, fshh_solver_config* out);
FSHH_API fshh_status fshh_config_spikes(const fshh_config* config, fshh_spike_options* out);
FSHH_API fshh_status fshh_config_series(const fshh_config* config, fshh_series_options* out);
FSHH_API fshh_status fshh_config_viability(const fshh_config* config,
                                           fshh_viability_options* out);
/* Typed getters; FSHH_ERR_USAGE on unknown/unset keys or a type mismatch. */
FSHH_API fshh_status fshh_config_real(const fshh_config* config, const char* key, double* out);
FSHH_API fshh_status fshh_config_integer(const fshh_config* config, const char* key,
                                         uint64_t* out);
FSHH_API fshh_status fshh_config_flag(const fshh_config* config, const char* key, int* out);
/* Sweep currents from sweep_start/stop/step. currents may be NULL. */
FSHH_API fshh_status fshh_config_sweep_currents(const fshh_config* config, size_t* count,
                                                double* currents, size_t capacity);
/* Fails with FSHH_ERR_USAGE naming the key when it is unset. */
FSHH_API fshh_status fshh_config_require(const fshh_config* config, const char* key);

#ifdef __cplusplus
}
#endif

#endif /* FSHH_FSHH_H */
