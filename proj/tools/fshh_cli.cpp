// fshh command-line front end. Talks to libfshh through the C API only.
//
// Exit codes: 0 success, 1 numerical/internal failure, 2 usage error,
// 3 I/O error, 4 invariant violated (viability or voltage bound).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fshh/fshh.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitViolation = 4;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(fshh_status status) {
  switch (status) {
    case FSHH_OK: return kExitOk;
    case FSHH_ERR_USAGE:
    case FSHH_ERR_INVALID_ARGUMENT: return kExitUsage;
    case FSHH_ERR_IO: return kExitIo;
    case FSHH_ERR_VIABILITY: return kExitViolation;
    default: return kExitFailure;
  }
}

void check(fshh_status status) {
  if (status != FSHH_OK) throw Failure{exit_code_for(status), fshh_last_error()};
}

[[noreturn]] void usage_error(const std::string& message) { throw Failure{kExitUsage, message}; }

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using ConfigHandle = Handle<fshh_config, fshh_config_free>;
using ResultHandle = Handle<fshh_result, fshh_result_free>;
using DriverHandle = Handle<fshh_driver, fshh_driver_free>;
using ReportHandle = Handle<fshh_viability_report, fshh_viability_report_free>;
using SweepHandle = Handle<fshh_sweep, fshh_sweep_free>;
using SeriesHandle = Handle<fshh_series, fshh_series_free>;

// JSON has no infinity; emit null for non-finite numbers.
json number(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

// Options shared by every subcommand. Values are kept as text and handed to
// the config parser so validation and error messages live in one place.
struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::vector<std::pair<std::string, std::string>> flags;
};

void add_flag(CLI::App* cmd, CommonOptions& common, const std::string& flag,
              const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&common, key](const std::string& value) { common.flags.emplace_back(key, value); },
      help);
}

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--config", common.config_path, "key = value configuration file");
  cmd->add_option("--set", common.overrides, "Override any configuration key (key=value)");
  add_flag(cmd, common, "--out", "out", "Output directory");
  add_flag(cmd, common, "--T", "T", "Horizon in ms");
  add_flag(cmd, common, "--dt", "dt", "Step size in ms");
  add_flag(cmd, common, "--I", "I", "Applied current");
  add_flag(cmd, common, "--V0", "V0", "Initial voltage; gates start at equilibrium");
  add_flag(cmd, common, "--hurst", "hurst", "Hurst parameter");
  add_flag(cmd, common, "--sigma", "sigma", "Noise intensity for all three gates");
  add_flag(cmd, common, "--seed", "seed", "Master seed");
  add_flag(cmd, common, "--generator", "generator", "wood_chan or cholesky");
  add_flag(cmd, common, "--clamp-policy", "clamp_policy", "clamp_and_log or error_on_exit");
  add_flag(cmd, common, "--threshold", "threshold", "Spike threshold in mV");
  add_flag(cmd, common, "--refractory", "refractory", "Spike refractory period in ms");
}

ConfigHandle build_config(const CommonOptions& common) {
  fshh_config* raw = nullptr;
  if (!common.config_path.empty()) {
    check(fshh_config_load(common.config_path.c_str(), &raw));
  } else {
    raw = fshh_config_new();
    if (raw == nullptr) throw Failure{kExitFailure, fshh_last_error()};
  }
  ConfigHandle config(raw);
  for (const std::string& item : common.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) usage_error("--set expects key=value, got '" + item + "'");
    check(fshh_config_set(config.get(), item.substr(0, eq).c_str(), item.substr(eq + 1).c_str()));
  }
  for (const auto& [key, value] : common.flags) {
    check(fshh_config_set(config.get(), key.c_str(), value.c_str()));
  }
  return config;
}

double config_real(const fshh_config* config, const char* key) {
  double value = 0.0;
  check(fshh_config_real(config, key, &value));
  return value;
}

uint64_t config_integer(const fshh_config* config, const char* key) {
  uint64_t value = 0;
  check(fshh_config_integer(config, key, &value));
  return value;
}

bool config_flag(const fshh_config* config, const char* key) {
  int value = 0;
  check(fshh_config_flag(config, key, &value));
  return value != 0;
}

std::filesystem::path output_dir(const fshh_config* config) {
  check(fshh_config_require(config, "out"));
  return fshh_config_get(config, "out");
}

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Failure{kExitIo, "cannot create output directory '" + dir.string() + "'"};
  }
}

std::string path_in(const std::filesystem::path& dir, const char* name) {
  return (dir / name).string();
}

void initial_state(double v0, double x0[4]) {
  check(fshh_equilibrium(v0, x0));
  x0[3] = v0;
}

bool has_noise(const fshh_params& p) {
  return p.sigma[0] != 0.0 || p.sigma[1] != 0.0 || p.sigma[2] != 0.0;
}

// ------------------------------------------------------------------ simulate

int cmd_simulate(const CommonOptions& common) {
  ConfigHandle config = build_config(common);
  fshh_params params;
  fshh_solver_config solver;
  fshh_spike_options spikes;
  fshh_series_options series;
  check(fshh_config_params(config.get(), &params));
  check(fshh_config_solver(config.get(), &solver));
  check(fshh_config_spikes(config.get(), &spikes));
  check(fshh_config_series(config.get(), &series));
  const double window = config_real(config.get(), "window");
  const bool svg = config_flag(config.get(), "svg");
  const std::filesystem::path dir = output_dir(config.get());

  double x0[4];
  initial_state(config_real(config.get(), "V0"), x0);
  fshh_result* raw = nullptr;
  check(fshh_simulate(x0, &params, &solver, &raw));
  ResultHandle result(raw);

  size_t spike_count = 0;
  check(fshh_detect_spikes(result.get(), &spikes, &spike_count, nullptr, 0));
  std::vector<double> spike_times(spike_count);
  check(fshh_detect_spikes(result.get(), &spikes, &spike_count, spike_times.data(),
                           spike_times.size()));

  json windows = json::array();
  if (window > 0.0) {
    size_t count = 0;
    check(fshh_classify_windows(result.get(), &spikes, window, &count, nullptr, 0));
    std::vector<fshh_regime> labels(count);
    check(fshh_classify_windows(result.get(), &spikes, window, &count, labels.data(),
                                labels.size()));
    for (fshh_regime r : labels) windows.push_back(fshh_regime_name(r));
  }

  json summary;
  summary["command"] = "simulate";
  summary["stochastic"] = has_noise(params);
  summary["points"] = fshh_result_points(result.get());
  summary["spike_count"] = spike_count;
  summary["spike_times"] = spike_times;
  summary["max_abs_v"] = fshh_result_max_abs_v(result.get());
  summary["clamp_count"] = fshh_result_clamp_count(result.get());
  summary["apriori_bound"] = number(fshh_result_apriori_bound(result.get()));
  summary["log_apriori_bound"] = number(fshh_result_log_apriori_bound(result.get()));
  summary["bound_respected"] = fshh_result_bound_respected(result.get()) != 0;
  summary["windows"] = windows;
  if (has_noise(params)) {
    summary["hurst"] = solver.hurst;
    summary["driver_seed"] = fshh_result_driver_seed(result.get());
    double lo = 0.0, hi = 0.0;
    fshh_result_pre_clamp_range(result.get(), &lo, &hi);
    summary["min_gate_pre_clamp"] = lo;
    summary["max_gate_pre_clamp"] = hi;
    fshh_regularity reg;
    if (fshh_result_regularity(result.get(), series.coordinate, series.max_log2_lag, &reg) ==
        FSHH_OK) {
      summary["regularity_exponent"] = reg.exponent;
      summary["regularity_fit_residual"] = reg.fit_residual;
    } else {
      summary["regularity_exponent"] = nullptr;
      summary["regularity_error"] = fshh_last_error();
    }
  }

  prepare_output_dir(dir);
  check(fshh_result_write_csv(result.get(), path_in(dir, "trajectory.csv").c_str()));
  check(fshh_result_write_clamp_csv(result.get(), path_in(dir, "clamp_log.csv").c_str()));
  if (svg) check(fshh_result_write_svg(result.get(), path_in(dir, "voltage.svg").c_str()));
  check(fshh_config_save(config.get(), path_in(dir, "run.cfg").c_str()));

  std::cout << summary.dump(2) << '\n';
  if (!fshh_result_bound_respected(result.get())) {
    std::cerr << "error: max |V| exceeded the a-priori voltage bound\n";
    return kExitViolation;
  }
  return kExitOk;
}

// --------------------------------------------------------------------- sweep

int cmd_sweep(const CommonOptions& common) {
  ConfigHandle config = build_config(common);
  fshh_params params;
  fshh_solver_config solver;
  fshh_spike_options spikes;
  check(fshh_config_params(config.get(), &params));
  check(fshh_config_solver(config.get(), &solver));
  check(fshh_config_spikes(config.get(), &spikes));
  const double v0 = config_real(config.get(), "V0");
  size_t count = 0;
  check(fshh_config_sweep_currents(config.get(), &count, nullptr, 0));
  std::vector<double> currents(count);
  check(fshh_config_sweep_currents(config.get(), &count, currents.data(), currents.size()));
  const std::filesystem::path dir = output_dir(config.get());

  fshh_sweep* raw = nullptr;
  check(fshh_bifurcation_sweep(currents.data(), currents.size(), &params, &solver, &spikes, v0,
                               &raw));
  SweepHandle sweep(raw);

  json rows = json::array();
  for (size_t i = 0; i < fshh_sweep_rows(sweep.get()); ++i) {
    double current = 0.0;
    size_t n = 0;
    check(fshh_sweep_row(sweep.get(), i, &current, &n));
    rows.push_back({{"I", current}, {"spike_count", n}});
  }
  json summary;
  summary["command"] = "sweep";
  summary["rows"] = rows;
  double threshold = 0.0;
  summary["rest_threshold"] =
      fshh_sweep_rest_threshold(sweep.get(), &threshold) ? json(threshold) : json(nullptr);
  summary["single_threshold"] =
      fshh_sweep_single_threshold(sweep.get(), &threshold) ? json(threshold) : json(nullptr);

  prepare_output_dir(dir);
  check(fshh_sweep_write_csv(sweep.get(), path_in(dir, "sweep.csv").c_str()));
  check(fshh_config_save(config.get(), path_in(dir, "run.cfg").c_str()));
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

// ----------------------------------------------------------------------- fbm

int cmd_fbm(const CommonOptions& common) {
  ConfigHandle config = build_config(common);
  const double hurst = config_real(config.get(), "hurst");
  if (!(hurst > 0.0 && hurst < 1.0)) usage_error("hurst must lie in ]0,1[ for fbm");
  const double horizon = config_real(config.get(), "T");
  const uint64_t steps = config_integer(config.get(), "fbm_steps");
  const uint64_t seed = config_integer(config.get(), "seed");
  fshh_solver_config solver;
  check(fshh_config_solver(config.get(), &solver));
  const std::filesystem::path dir = output_dir(config.get());

  fshh_driver* raw = nullptr;
  check(fshh_driver_sample(static_cast<size_t>(steps), horizon, hurst, seed, solver.generator,
                           &raw));
  DriverHandle driver(raw);

  json summary;
  summary["command"] = "fbm";
  summary["steps"] = steps;
  summary["horizon"] = horizon;
  summary["hurst"] = hurst;
  summary["seed"] = seed;
  summary["generator"] = solver.generator == FSHH_CHOLESKY ? "cholesky" : "wood_chan";
  json terminal = json::array();
  const size_t points = fshh_driver_points(driver.get());
  for (int k = 0; k < 3; ++k) terminal.push_back(fshh_driver_values(driver.get(), k)[points - 1]);
  summary["terminal_values"] = terminal;

  prepare_output_dir(dir);
  check(fshh_driver_write_csv(driver.get(), path_in(dir, "fbm.csv").c_str()));
  check(fshh_config_save(config.get(), path_in(dir, "run.cfg").c_str()));
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

// ----------------------------------------------------------------- viability

int cmd_viability(const CommonOptions& common) {
  ConfigHandle config = build_config(common);
  fshh_params params;
  fshh_viability_options options;
  check(fshh_config_params(config.get(), &params));
  check(fshh_config_viability(config.get(), &options));
  std::optional<std::filesystem::path> dir;
  if (fshh_config_has(config.get(), "out")) dir = output_dir(config.get());

  fshh_viability_report* raw = nullptr;
  check(fshh_check_viability(&params, &options, &raw));
  ReportHandle report(raw);
  const bool pass = fshh_viability_pass(report.get()) != 0;

  json summary;
  summary["command"] = "viability";
  summary["pass"] = pass;
  summary["points_checked"] = fshh_viability_points_checked(report.get());
  summary["max_drift_violation"] = number(fshh_viability_max_drift_violation(report.get()));
  summary["max_diffusion_violation"] =
      number(fshh_viability_max_diffusion_violation(report.get()));
  double worst[4];
  if (fshh_viability_worst_point(report.get(), worst)) {
    summary["worst_point"] = {{"m", worst[0]}, {"h", worst[1]}, {"n", worst[2]}, {"V", worst[3]}};
  }
  summary["report"] = fshh_viability_report_text(report.get());

  if (dir) {
    prepare_output_dir(*dir);
    const std::string path = path_in(*dir, "viability.txt");
    std::FILE* f = std::fopen((path + ".tmp").c_str(), "wb");
    const std::string text = fshh_viability_report_text(report.get());
    const bool ok = f != nullptr && std::fwrite(text.data(), 1, text.size(), f) == text.size();
    if (f != nullptr && std::fclose(f) != 0) throw Failure{kExitIo, "failed writing '" + path + "'"};
    std::error_code ec;
    if (ok) std::filesystem::rename(path + ".tmp", path, ec);
    if (!ok || ec) {
      std::filesystem::remove(path + ".tmp", ec);
      throw Failure{kExitIo, "failed writing '" + path + "'"};
    }
    check(fshh_config_save(config.get(), path_in(*dir, "run.cfg").c_str()));
  }

  std::cout << summary.dump(2) << '\n';
  if (!pass) {
    std::cerr << "error: viability condition violated\n" << fshh_viability_report_text(report.get());
    return kExitViolation;
  }
  return kExitOk;
}

// -------------------------------------------------------------------- series

int cmd_series(const CommonOptions& common, const std::vector<double>& hurst) {
  ConfigHandle config = build_config(common);
  if (hurst.empty()) usage_error("series needs at least one Hurst value");
  for (size_t i = 1; i < hurst.size(); ++i) {
    if (hurst[i] > hurst[i - 1]) {
      usage_error("Hurst sequence must be non-increasing (monotonicity requirement violated at "
                  "position " + std::to_string(i + 1) + ")");
    }
  }
  fshh_params params;
  fshh_solver_config solver;
  fshh_series_options options;
  check(fshh_config_params(config.get(), &params));
  check(fshh_config_solver(config.get(), &solver));
  check(fshh_config_series(config.get(), &options));
  if (!has_noise(params)) usage_error("series needs a non-zero sigma (set --sigma)");
  const std::filesystem::path dir = output_dir(config.get());

  fshh_series* raw = nullptr;
  check(fshh_recording_series(hurst.data(), hurst.size(), &params, &solver, &options, &raw));
  SeriesHandle series(raw);

  json recordings = json::array();
  for (size_t i = 0; i < fshh_series_recordings(series.get()); ++i) {
    double h = 0.0, exponent = 0.0, residual = 0.0;
    check(fshh_series_recording(series.get(), i, &h, &exponent, &residual));
    recordings.push_back({{"k", i + 1}, {"H", h}, {"exponent", exponent},
                          {"fit_residual", residual}});
  }
  json summary;
  summary["command"] = "series";
  summary["ensemble"] = options.ensemble;
  summary["recordings"] = recordings;

  prepare_output_dir(dir);
  check(fshh_series_write_csv(series.get(), path_in(dir, "series.csv").c_str()));
  check(fshh_config_save(config.get(), path_in(dir, "run.cfg").c_str()));
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional stochastic Hodgkin-Huxley simulator"};
  app.set_version_flag("--version", std::string(fshh_version()));
  app.require_subcommand(1);

  CommonOptions simulate_opts, sweep_opts, fbm_opts, viability_opts, series_opts;

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate one trajectory");
  add_common(simulate, simulate_opts);
  add_flag(simulate, simulate_opts, "--window", "window", "Regime window in ms (0 disables)");
  add_flag(simulate, simulate_opts, "--coordinate", "coordinate",
           "Coordinate for the regularity estimate (m, h, n or V)");
  simulate->add_flag_callback(
      "--svg", [&] { simulate_opts.flags.emplace_back("svg", "true"); }, "Also write voltage.svg");

  CLI::App* sweep = app.add_subcommand("sweep", "Spike counts over a range of applied currents");
  add_common(sweep, sweep_opts);
  add_flag(sweep, sweep_opts, "--I-start", "sweep_start", "First current");
  add_flag(sweep, sweep_opts, "--I-stop", "sweep_stop", "Last current (inclusive)");
  add_flag(sweep, sweep_opts, "--I-step", "sweep_step", "Current increment");

  CLI::App* fbm = app.add_subcommand("fbm", "Sample three independent fBm paths");
  add_common(fbm, fbm_opts);
  add_flag(fbm, fbm_opts, "--N", "fbm_steps", "Number of steps");

  CLI::App* viability = app.add_subcommand("viability", "Check the viability condition on K");
  add_common(viability, viability_opts);
  add_flag(viability, viability_opts, "--sigma-row4", "sigma_row4",
           "Add a constant to the voltage row of sigma");
  add_flag(viability, viability_opts, "--sigma-offset", "sigma_boundary_offset",
           "Add a constant to the gate diagonal of sigma");

  std::vector<double> hurst_list;
  CLI::App* series = app.add_subcommand("series", "Recording series with a decreasing Hurst sequence");
  add_common(series, series_opts);
  series->add_option("hurst_values", hurst_list, "Hurst values, non-increasing")->required();
  add_flag(series, series_opts, "--ensemble", "ensemble", "Runs per recording");
  add_flag(series, series_opts, "--coordinate", "coordinate", "m, h, n or V");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(simulate_opts);
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*fbm) return cmd_fbm(fbm_opts);
    if (*viability) return cmd_viability(viability_opts);
    if (*series) return cmd_series(series_opts, hurst_list);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
