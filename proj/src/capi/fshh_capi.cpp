// extern "C" surface over the C++ core. Each entry point translates
// exceptions into fshh_status codes and records the message in a
// thread-local slot read by fshh_last_error().

#include "fshh/fshh.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "fshh/analysis.hpp"
#include "fshh/config.hpp"
#include "fshh/error.hpp"
#include "fshh/fbm.hpp"
#include "fshh/io.hpp"
#include "fshh/solver.hpp"
#include "fshh/viability.hpp"

struct fshh_driver {
  fshh::MultiFbmPath path;
};

struct fshh_viability_report {
  fshh::ViabilityReport report;
  std::string text;
};

struct fshh_result {
  fshh::SimulationResult result;
  std::vector<double> states;  // flattened (m, h, n, V)
};

struct fshh_convergence {
  fshh::ConvergenceTable table;
};

struct fshh_sweep {
  fshh::SweepTable table;
};

struct fshh_series {
  fshh::RecordingSeries series;
};

struct fshh_config {
  fshh::RunConfig config;
  mutable std::string scratch;
};

namespace {

thread_local std::string g_last_error;

fshh_status fail(fshh_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs body, mapping the exception hierarchy onto status codes.
template <typename Body>
fshh_status guarded(Body&& body) noexcept {
  try {
    body();
    return FSHH_OK;
  } catch (const fshh::UsageError& e) {
    return fail(FSHH_ERR_USAGE, e.what());
  } catch (const fshh::InvalidArgument& e) {
    return fail(FSHH_ERR_INVALID_ARGUMENT, e.what());
  } catch (const fshh::EmbeddingError& e) {
    return fail(FSHH_ERR_EMBEDDING, e.what());
  } catch (const fshh::NumericalError& e) {
    return fail(FSHH_ERR_NUMERICAL, e.what());
  } catch (const fshh::ViabilityBreach& e) {
    return fail(FSHH_ERR_VIABILITY, e.what());
  } catch (const fshh::IoError& e) {
    return fail(FSHH_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FSHH_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FSHH_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FSHH_ERR_INTERNAL, "unknown error");
  }
}

template <typename T>
void require(const T* p, const char* name) {
  if (p == nullptr) throw fshh::InvalidArgument(std::string(name) + " must not be NULL");
}

fshh::HHParams to_cpp(const fshh_params& p) {
  fshh::HHParams out;
  out.capacitance = p.capacitance;
  out.current = p.current;
  out.e_na = p.e_na;
  out.e_k = p.e_k;
  out.e_l = p.e_l;
  out.gbar_na = p.gbar_na;
  out.gbar_k = p.gbar_k;
  out.gbar_l = p.gbar_l;
  out.sigma = {p.sigma[0], p.sigma[1], p.sigma[2]};
  return out;
}

fshh_params to_c(const fshh::HHParams& p) {
  fshh_params out{};
  out.capacitance = p.capacitance;
  out.current = p.current;
  out.e_na = p.e_na;
  out.e_k = p.e_k;
  out.e_l = p.e_l;
  out.gbar_na = p.gbar_na;
  out.gbar_k = p.gbar_k;
  out.gbar_l = p.gbar_l;
  for (int i = 0; i < 3; ++i) out.sigma[i] = p.sigma[i];
  return out;
}

fshh::Generator to_cpp(fshh_generator g) {
  switch (g) {
    case FSHH_WOOD_CHAN: return fshh::Generator::wood_chan;
    case FSHH_CHOLESKY: return fshh::Generator::cholesky;
  }
  throw fshh::InvalidArgument("unknown generator");
}

fshh::ClampPolicy to_cpp(fshh_clamp_policy p) {
  switch (p) {
    case FSHH_CLAMP_AND_LOG: return fshh::ClampPolicy::clamp_and_log;
    case FSHH_ERROR_ON_EXIT: return fshh::ClampPolicy::error_on_exit;
  }
  throw fshh::InvalidArgument("unknown clamp policy");
}

fshh::SolverConfig to_cpp(const fshh_solver_config& c) {
  fshh::SolverConfig out;
  out.horizon = c.horizon;
  out.dt = c.dt;
  out.hurst = c.hurst;
  out.seed = c.seed;
  out.clamp_policy = to_cpp(c.clamp_policy);
  out.generator = to_cpp(c.generator);
  return out;
}

fshh_solver_config to_c(const fshh::SolverConfig& c) {
  fshh_solver_config out{};
  out.horizon = c.horizon;
  out.dt = c.dt;
  out.hurst = c.hurst;
  out.seed = c.seed;
  out.clamp_policy = c.clamp_policy == fshh::ClampPolicy::error_on_exit ? FSHH_ERROR_ON_EXIT
                                                                         : FSHH_CLAMP_AND_LOG;
  out.generator = c.generator == fshh::Generator::cholesky ? FSHH_CHOLESKY : FSHH_WOOD_CHAN;
  return out;
}

fshh::State to_state(const double x[4]) { return fshh::State{x[0], x[1], x[2], x[3]}; }

void from_state(const fshh::State& s, double out[4]) {
  out[0] = s.m;
  out[1] = s.h;
  out[2] = s.n;
  out[3] = s.v;
}

fshh::Coordinate to_coordinate(int c) {
  if (c < 0 || c > 3) throw fshh::InvalidArgument("coordinate must be 0 (m), 1 (h), 2 (n) or 3 (V)");
  return static_cast<fshh::Coordinate>(c);
}

fshh::SpikeOptions to_cpp(const fshh_spike_options* s) {
  fshh::SpikeOptions out;
  if (s != nullptr) {
    out.threshold = s->threshold;
    out.refractory = s->refractory;
  }
  return out;
}

fshh_result* wrap(fshh::SimulationResult r) {
  auto* out = new fshh_result{std::move(r), {}};
  out->states.reserve(out->result.trajectory.size() * 4);
  for (const fshh::State& s : out->result.trajectory) {
    out->states.insert(out->states.end(), {s.m, s.h, s.n, s.v});
  }
  return out;
}

}  // namespace

extern "C" {

FSHH_API const char* fshh_last_error(void) { return g_last_error.c_str(); }

FSHH_API const char* fshh_status_string(fshh_status status) {
  switch (status) {
    case FSHH_OK: return "ok";
    case FSHH_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FSHH_ERR_NUMERICAL: return "numerical error";
    case FSHH_ERR_EMBEDDING: return "embedding failure";
    case FSHH_ERR_VIABILITY: return "viability breach";
    case FSHH_ERR_IO: return "I/O error";
    case FSHH_ERR_USAGE: return "usage error";
    case FSHH_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

FSHH_API const char* fshh_version(void) { return "1.0.0"; }

FSHH_API void fshh_params_default(fshh_params* out) {
  if (out != nullptr) *out = to_c(fshh::HHParams{});
}

FSHH_API void fshh_solver_config_default(fshh_solver_config* out) {
  if (out != nullptr) *out = to_c(fshh::SolverConfig{});
}

// --- gating kinetics

FSHH_API fshh_status fshh_rates(double v, double out[6]) {
  return guarded([&] {
    require(out, "out");
    const fshh::GatingRates r = fshh::rates(v);
    const double values[6] = {r.alpha_m, r.beta_m, r.alpha_h, r.beta_h, r.alpha_n, r.beta_n};
    std::copy(values, values + 6, out);
  });
}

FSHH_API fshh_status fshh_drift(const double x[4], const fshh_params* params, double out[4]) {
  return guarded([&] {
    require(x, "x");
    require(params, "params");
    require(out, "out");
    const fshh::HHParams p = to_cpp(*params);
    p.validate();
    const fshh::Vec4 b = fshh::drift(to_state(x), p);
    std::copy(b.begin(), b.end(), out);
  });
}

FSHH_API fshh_status fshh_diffusion(const double x[4], const fshh_params* params,
                                    double out[12]) {
  return guarded([&] {
    require(x, "x");
    require(params, "params");
    require(out, "out");
    const fshh::HHParams p = to_cpp(*params);
    p.validate();
    const fshh::Diffusion s = fshh::diffusion(to_state(x), p);
    for (int i = 0; i < 4; ++i) {
      for (int k = 0; k < 3; ++k) out[i * 3 + k] = s[i][k];
    }
  });
}

FSHH_API fshh_status fshh_equilibrium(double v, double out[4]) {
  return guarded([&] {
    require(out, "out");
    from_state(fshh::equilibrium(v), out);
  });
}

// --- fBm

FSHH_API fshh_status fshh_fbm_covariance(double s, double t, double hurst, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = fshh::fbm_covariance(s, t, hurst);
  });
}

FSHH_API fshh_status fshh_driver_sample(size_t steps, double horizon, double hurst,
                                        uint64_t master_seed, fshh_generator generator,
                                        fshh_driver** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new fshh_driver{
        fshh::sample_driver(steps, horizon, hurst, master_seed, to_cpp(generator))};
  });
}

FSHH_API void fshh_driver_free(fshh_driver* driver) { delete driver; }

FSHH_API size_t fshh_driver_points(const fshh_driver* driver) {
  return driver == nullptr ? 0 : driver->path.steps() + 1;
}

FSHH_API const double* fshh_driver_values(const fshh_driver* driver, int component) {
  if (driver == nullptr || component < 0 || component > 2) return nullptr;
  return driver->path.components[static_cast<std::size_t>(component)].values.data();
}

FSHH_API fshh_status fshh_driver_write_csv(const fshh_driver* driver, const char* path) {
  return guarded([&] {
    require(driver, "driver");
    require(path, "path");
    fshh::write_driver_csv(path, driver->path);
  });
}

// --- viability

FSHH_API fshh_status fshh_check_viability(const fshh_params* params,
                                          const fshh_viability_options* options,
                                          fshh_viability_report** out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    *out = nullptr;
    const fshh::HHParams p = to_cpp(*params);
    p.validate();
    const double row4 = options != nullptr ? options->sigma_row4 : 0.0;
    const double offset = options != nullptr ? options->sigma_boundary_offset : 0.0;
    auto drift_fn = [&](const fshh::State& x) { return fshh::drift(x, p); };
    auto diffusion_fn = [&](const fshh::State& x) {
      fshh::Diffusion s = fshh::diffusion(x, p);
      for (int k = 0; k < 3; ++k) {
        s[3][k] += row4;
        s[k][k] += offset;
      }
      return s;
    };
    auto* report = new fshh_viability_report{fshh::check_viability(drift_fn, diffusion_fn), {}};
    report->text = report->report.to_text();
    *out = report;
  });
}

FSHH_API void fshh_viability_report_free(fshh_viability_report* report) { delete report; }

FSHH_API size_t fshh_viability_points_checked(const fshh_viability_report* report) {
  return report == nullptr ? 0 : report->report.points_checked;
}

FSHH_API double fshh_viability_max_drift_violation(const fshh_viability_report* report) {
  return report == nullptr ? 0.0 : report->report.max_drift_violation;
}

FSHH_API double fshh_viability_max_diffusion_violation(const fshh_viability_report* report) {
  return report == nullptr ? 0.0 : report->report.max_diffusion_violation;
}

FSHH_API int fshh_viability_pass(const fshh_viability_report* report) {
  return report != nullptr && report->report.pass ? 1 : 0;
}

FSHH_API int fshh_viability_worst_point(const fshh_viability_report* report, double out[4]) {
  if (report == nullptr || out == nullptr || !report->report.worst_point) return 0;
  from_state(*report->report.worst_point, out);
  return 1;
}

FSHH_API const char* fshh_viability_report_text(const fshh_viability_report* report) {
  return report == nullptr ? "" : report->text.c_str();
}

FSHH_API fshh_status fshh_apriori_voltage_bound(const fshh_params* params, const double x0[4],
                                                double horizon, double* bound,
                                                double* log_bound) {
  return guarded([&] {
    require(params, "params");
    require(x0, "x0");
    const fshh::HHParams p = to_cpp(*params);
    const double log_value = fshh::log_apriori_voltage_bound(p, to_state(x0), horizon);
    if (bound != nullptr) *bound = std::exp(log_value);
    if (log_bound != nullptr) *log_bound = log_value;
  });
}

// --- solver

FSHH_API fshh_status fshh_simulate(const double x0[4], const fshh_params* params,
                                   const fshh_solver_config* config, fshh_result** out) {
  return guarded([&] {
    require(x0, "x0");
    require(params, "params");
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    *out = wrap(fshh::simulate(to_state(x0), to_cpp(*params), to_cpp(*config)));
  });
}

FSHH_API fshh_status fshh_simulate_deterministic(const double x0[4], const fshh_params* params,
                                                 const fshh_solver_config* config,
                                                 fshh_result** out) {
  return guarded([&] {
    require(x0, "x0");
    require(params, "params");
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    *out = wrap(fshh::simulate_deterministic(to_state(x0), to_cpp(*params), to_cpp(*config)));
  });
}

FSHH_API void fshh_result_free(fshh_result* result) { delete result; }

FSHH_API size_t fshh_result_points(const fshh_result* result) {
  return result == nullptr ? 0 : result->result.trajectory.size();
}

FSHH_API const double* fshh_result_times(const fshh_result* result) {
  return result == nullptr ? nullptr : result->result.grid.data();
}

FSHH_API const double* fshh_result_states(const fshh_result* result) {
  return result == nullptr ? nullptr : result->states.data();
}

FSHH_API size_t fshh_result_clamp_count(const fshh_result* result) {
  return result == nullptr ? 0 : result->result.clamp_events.size();
}

FSHH_API fshh_status fshh_result_clamp_event(const fshh_result* result, size_t index,
                                             size_t* step, int* coord, double* pre_value) {
  return guarded([&] {
    require(result, "result");
    if (index >= result->result.clamp_events.size()) {
      throw fshh::InvalidArgument("clamp event index out of range");
    }
    const fshh::ClampEvent& e = result->result.clamp_events[index];
    if (step != nullptr) *step = e.step;
    if (coord != nullptr) *coord = e.coord;
    if (pre_value != nullptr) *pre_value = e.pre_value;
  });
}

FSHH_API double fshh_result_max_abs_v(const fshh_result* result) {
  return result == nullptr ? 0.0 : result->result.max_abs_v;
}

FSHH_API double fshh_result_apriori_bound(const fshh_result* result) {
  return result == nullptr ? 0.0 : result->result.apriori_bound;
}

FSHH_API double fshh_result_log_apriori_bound(const fshh_result* result) {
  return result == nullptr ? 0.0 : result->result.log_apriori_bound;
}

FSHH_API int fshh_result_bound_respected(const fshh_result* result) {
  return result != nullptr && result->result.bound_respected ? 1 : 0;
}

FSHH_API uint64_t fshh_result_driver_seed(const fshh_result* result) {
  return result == nullptr ? 0 : result->result.driver_seed;
}

FSHH_API void fshh_result_pre_clamp_range(const fshh_result* result, double* min_gate,
                                          double* max_gate) {
  if (result == nullptr) return;
  if (min_gate != nullptr) *min_gate = result->result.min_gate_pre_clamp;
  if (max_gate != nullptr) *max_gate = result->result.max_gate_pre_clamp;
}

FSHH_API fshh_status fshh_result_write_csv(const fshh_result* result, const char* path) {
  return guarded([&] {
    require(result, "result");
    require(path, "path");
    fshh::write_trajectory_csv(path, result->result);
  });
}

FSHH_API fshh_status fshh_result_write_clamp_csv(const fshh_result* result, const char* path) {
  return guarded([&] {
    require(result, "result");
    require(path, "path");
    fshh::write_clamp_csv(path, result->result);
  });
}

FSHH_API fshh_status fshh_result_write_svg(const fshh_result* result, const char* path) {
  return guarded([&] {
    require(result, "result");
    require(path, "path");
    fshh::write_voltage_svg(path, result->result);
  });
}

FSHH_API fshh_status fshh_step_euler(const double x[4], double dt, const double db[3],
                                     const fshh_params* params, fshh_clamp_policy policy,
                                     double out[4]) {
  return guarded([&] {
    require(x, "x");
    require(db, "db");
    require(params, "params");
    require(out, "out");
    const fshh::HHParams p = to_cpp(*params);
    p.validate();
    const fshh::State next =
        fshh::step_euler(to_state(x), dt, {db[0], db[1], db[2]}, p, to_cpp(policy));
    from_state(next, out);
  });
}

FSHH_API fshh_status fshh_convergence_probe(const double x0[4], const fshh_params* params,
                                            double horizon, double hurst, uint64_t seed,
                                            const double* dt_list, size_t count,
                                            fshh_convergence** out) {
  return guarded([&] {
    require(x0, "x0");
    require(params, "params");
    require(dt_list, "dt_list");
    require(out, "out");
    *out = nullptr;
    *out = new fshh_convergence{fshh::convergence_probe(
        to_state(x0), to_cpp(*params), horizon, hurst, seed, std::span(dt_list, count))};
  });
}

FSHH_API void fshh_convergence_free(fshh_convergence* table) { delete table; }

FSHH_API size_t fshh_convergence_rows(const fshh_convergence* table) {
  return table == nullptr ? 0 : table->table.rows.size();
}

FSHH_API fshh_status fshh_convergence_row(const fshh_convergence* table, size_t index,
                                          double* dt, double* gap_to_finest,
                                          double* gap_to_next) {
  return guarded([&] {
    require(table, "table");
    if (index >= table->table.rows.size()) throw fshh::InvalidArgument("row index out of range");
    const fshh::ConvergenceRow& row = table->table.rows[index];
    if (dt != nullptr) *dt = row.dt;
    if (gap_to_finest != nullptr) *gap_to_finest = row.gap_to_finest;
    if (gap_to_next != nullptr) *gap_to_next = row.gap_to_next;
  });
}

FSHH_API double fshh_convergence_order(const fshh_convergence* table) {
  return table == nullptr ? 0.0 : table->table.observed_order;
}

// --- analysis

FSHH_API void fshh_spike_options_default(fshh_spike_options* out) {
  if (out == nullptr) return;
  const fshh::SpikeOptions defaults;
  out->threshold = defaults.threshold;
  out->refractory = defaults.refractory;
}

FSHH_API fshh_status fshh_detect_spikes(const fshh_result* result,
                                        const fshh_spike_options* options, size_t* count,
                                        double* spike_times, size_t capacity) {
  return guarded([&] {
    require(result, "result");
    const fshh::SpikeTrain train = fshh::detect_spikes(result->result, to_cpp(options));
    if (count != nullptr) *count = train.count();
    if (spike_times != nullptr) {
      std::copy_n(train.spike_times.begin(), std::min(capacity, train.count()), spike_times);
    }
  });
}

FSHH_API fshh_status fshh_bifurcation_sweep(const double* currents, size_t count,
                                            const fshh_params* params,
                                            const fshh_solver_config* config,
                                            const fshh_spike_options* spikes, double v0,
                                            fshh_sweep** out) {
  return guarded([&] {
    require(params, "params");
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    if (currents == nullptr || count == 0) {
      throw fshh::UsageError("sweep needs at least one current value");
    }
    *out = new fshh_sweep{fshh::bifurcation_sweep(std::span(currents, count), to_cpp(*params),
                                                  to_cpp(*config), to_cpp(spikes), v0)};
  });
}

FSHH_API void fshh_sweep_free(fshh_sweep* sweep) { delete sweep; }

FSHH_API size_t fshh_sweep_rows(const fshh_sweep* sweep) {
  return sweep == nullptr ? 0 : sweep->table.rows.size();
}

FSHH_API fshh_status fshh_sweep_row(const fshh_sweep* sweep, size_t index, double* current,
                                    size_t* spike_count) {
  return guarded([&] {
    require(sweep, "sweep");
    if (index >= sweep->table.rows.size()) throw fshh::InvalidArgument("row index out of range");
    if (current != nullptr) *current = sweep->table.rows[index].current;
    if (spike_count != nullptr) *spike_count = sweep->table.rows[index].spike_count;
  });
}

FSHH_API int fshh_sweep_rest_threshold(const fshh_sweep* sweep, double* out) {
  if (sweep == nullptr || !sweep->table.rest_threshold) return 0;
  if (out != nullptr) *out = *sweep->table.rest_threshold;
  return 1;
}

FSHH_API int fshh_sweep_single_threshold(const fshh_sweep* sweep, double* out) {
  if (sweep == nullptr || !sweep->table.single_threshold) return 0;
  if (out != nullptr) *out = *sweep->table.single_threshold;
  return 1;
}

FSHH_API fshh_status fshh_sweep_write_csv(const fshh_sweep* sweep, const char* path) {
  return guarded([&] {
    require(sweep, "sweep");
    require(path, "path");
    fshh::write_sweep_csv(path, sweep->table);
  });
}

FSHH_API fshh_status fshh_estimate_holder(const double* values, size_t count, double dt,
                                          size_t max_log2_lag, fshh_regularity* out) {
  return guarded([&] {
    require(values, "values");
    require(out, "out");
    fshh::HolderOptions options;
    options.max_log2_lag = max_log2_lag;
    const fshh::RegularityEstimate e =
        fshh::estimate_holder(std::span(values, count), dt, options);
    *out = fshh_regularity{e.exponent, e.slope, e.scales_used, e.fit_residual};
  });
}

FSHH_API fshh_status fshh_result_regularity(const fshh_result* result, int coordinate,
                                            size_t max_log2_lag, fshh_regularity* out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    fshh::HolderOptions options;
    options.max_log2_lag = max_log2_lag;
    const fshh::RegularityEstimate e =
        fshh::estimate_holder(result->result, to_coordinate(coordinate), options);
    *out = fshh_regularity{e.exponent, e.slope, e.scales_used, e.fit_residual};
  });
}

FSHH_API void fshh_series_options_default(fshh_series_options* out) {
  if (out == nullptr) return;
  const fshh::SeriesOptions defaults;
  out->ensemble = defaults.ensemble;
  out->coordinate = static_cast<int>(defaults.coordinate);
  out->max_log2_lag = defaults.holder.max_log2_lag;
  out->v0 = defaults.v0;
}

FSHH_API fshh_status fshh_recording_series(const double* hurst, size_t count,
                                           const fshh_params* params,
                                           const fshh_solver_config* config,
                                           const fshh_series_options* options,
                                           fshh_series** out) {
  return guarded([&] {
    require(params, "params");
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    if (hurst == nullptr || count == 0) throw fshh::UsageError("Hurst sequence must not be empty");
    fshh::SeriesOptions opts;
    if (options != nullptr) {
      opts.ensemble = options->ensemble;
      opts.coordinate = to_coordinate(options->coordinate);
      opts.holder.max_log2_lag = options->max_log2_lag;
      opts.v0 = options->v0;
    }
    *out = new fshh_series{fshh::simulate_recording_series(
        std::span(hurst, count), to_cpp(*params), to_cpp(*config), opts)};
  });
}

FSHH_API void fshh_series_free(fshh_series* series) { delete series; }

FSHH_API size_t fshh_series_recordings(const fshh_series* series) {
  return series == nullptr ? 0 : series->series.recordings.size();
}

FSHH_API fshh_status fshh_series_recording(const fshh_series* series, size_t index,
                                           double* hurst, double* median_exponent,
                                           double* median_residual) {
  return guarded([&] {
    require(series, "series");
    if (index >= series->series.recordings.size()) {
      throw fshh::InvalidArgument("recording index out of range");
    }
    const fshh::Recording& rec = series->series.recordings[index];
    if (hurst != nullptr) *hurst = rec.hurst;
    if (median_exponent != nullptr) *median_exponent = rec.median_exponent;
    if (median_residual != nullptr) *median_residual = rec.median_residual;
  });
}

FSHH_API fshh_status fshh_series_write_csv(const fshh_series* series, const char* path) {
  return guarded([&] {
    require(series, "series");
    require(path, "path");
    fshh::write_series_csv(path, series->series);
  });
}

FSHH_API fshh_status fshh_classify_windows(const fshh_result* result,
                                           const fshh_spike_options* spikes, double window,
                                           size_t* count, fshh_regime* labels,
                                           size_t capacity) {
  return guarded([&] {
    require(result, "result");
    const fshh::SpikeTrain train = fshh::detect_spikes(result->result, to_cpp(spikes));
    const double horizon = result->result.grid.back();
    const fshh::WindowLabels w = fshh::classify_windows(train, horizon, window);
    if (count != nullptr) *count = w.labels.size();
    if (labels != nullptr) {
      for (std::size_t i = 0; i < std::min(capacity, w.labels.size()); ++i) {
        labels[i] = static_cast<fshh_regime>(w.labels[i]);
      }
    }
  });
}

FSHH_API const char* fshh_regime_name(fshh_regime regime) {
  switch (regime) {
    case FSHH_REST: return "rest";
    case FSHH_SINGLE: return "single";
    case FSHH_MULTIPLE: return "multiple";
  }
  return "unknown";
}

// --- config

FSHH_API fshh_config* fshh_config_new(void) {
  try {
    return new fshh_config{};
  } catch (...) {
    g_last_error = "out of memory";
    return nullptr;
  }
}

FSHH_API void fshh_config_free(fshh_config* config) { delete config; }

FSHH_API fshh_status fshh_config_load(const char* path, fshh_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new fshh_config{fshh::RunConfig::load(path), {}};
  });
}

FSHH_API fshh_status fshh_config_parse(const char* text, fshh_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    *out = new fshh_config{fshh::RunConfig::parse(text), {}};
  });
}

FSHH_API fshh_status fshh_config_set(fshh_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->config.set(key, value);
  });
}

FSHH_API int fshh_config_has(const fshh_config* config, const char* key) {
  return config != nullptr && key != nullptr && config->config.has(key) ? 1 : 0;
}

FSHH_API const char* fshh_config_get(const fshh_config* config, const char* key) {
  if (config == nullptr || key == nullptr || !config->config.has(key)) return nullptr;
  config->scratch = config->config.get_text(key);
  return config->scratch.c_str();
}

FSHH_API const char* fshh_config_serialize(const fshh_config* config) {
  if (config == nullptr) return "";
  config->scratch = config->config.serialize();
  return config->scratch.c_str();
}

FSHH_API fshh_status fshh_config_save(const fshh_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    config->config.save(path);
  });
}

FSHH_API fshh_status fshh_config_params(const fshh_config* config, fshh_params* out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = to_c(config->config.params());
  });
}

FSHH_API fshh_status fshh_config_solver(const fshh_config* config, fshh_solver_config* out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = to_c(config->config.solver());
  });
}

FSHH_API fshh_status fshh_config_spikes(const fshh_config* config, fshh_spike_options* out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    const fshh::SpikeOptions s = config->config.spikes();
    out->threshold = s.threshold;
    out->refractory = s.refractory;
  });
}

FSHH_API fshh_status fshh_config_series(const fshh_config* config, fshh_series_options* out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    const fshh::SeriesOptions s = config->config.series();
    out->ensemble = s.ensemble;
    out->coordinate = static_cast<int>(s.coordinate);
    out->max_log2_lag = s.holder.max_log2_lag;
    out->v0 = s.v0;
  });
}

FSHH_API fshh_status fshh_config_viability(const fshh_config* config,
                                           fshh_viability_options* out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    out->sigma_row4 = config->config.real("sigma_row4");
    out->sigma_boundary_offset = config->config.real("sigma_boundary_offset");
  });
}

FSHH_API fshh_status fshh_config_real(const fshh_config* config, const char* key, double* out) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(out, "out");
    try {
      *out = config->config.real(key);
    } catch (const std::bad_variant_access&) {
      throw fshh::UsageError(std::string("key '") + key + "' is not a real number");
    }
  });
}

FSHH_API fshh_status fshh_config_integer(const fshh_config* config, const char* key,
                                         uint64_t* out) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(out, "out");
    try {
      *out = config->config.integer(key);
    } catch (const std::bad_variant_access&) {
      throw fshh::UsageError(std::string("key '") + key + "' is not an integer");
    }
  });
}

FSHH_API fshh_status fshh_config_flag(const fshh_config* config, const char* key, int* out) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(out, "out");
    try {
      *out = config->config.flag(key) ? 1 : 0;
    } catch (const std::bad_variant_access&) {
      throw fshh::UsageError(std::string("key '") + key + "' is not a flag");
    }
  });
}

FSHH_API fshh_status fshh_config_sweep_currents(const fshh_config* config, size_t* count,
                                                double* currents, size_t capacity) {
  return guarded([&] {
    require(config, "config");
    const std::vector<double> values = config->config.sweep_currents();
    if (count != nullptr) *count = values.size();
    if (currents != nullptr) {
      std::copy_n(values.begin(), std::min(capacity, values.size()), currents);
    }
  });
}

FSHH_API fshh_status fshh_config_require(const fshh_config* config, const char* key) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    (void)config->config.get_text(key);
  });
}

}  // extern "C"
