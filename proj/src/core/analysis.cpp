#include "fshh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "fshh/error.hpp"
#include "fshh/parallel.hpp"
#include "fshh/random.hpp"

namespace fshh {

SpikeTrain detect_spikes(std::span<const double> grid, std::span<const double> voltage,
                         const SpikeOptions& options) {
  if (grid.size() != voltage.size()) {
    throw InvalidArgument("grid and voltage must have the same length");
  }
  SpikeTrain train;
  train.threshold = options.threshold;
  train.refractory = options.refractory;
  for (std::size_t i = 1; i < voltage.size(); ++i) {
    const double before = voltage[i - 1];
    const double after = voltage[i];
    if (!(before < options.threshold && after >= options.threshold)) continue;
    const double frac = (options.threshold - before) / (after - before);
    const double t = grid[i - 1] + frac * (grid[i] - grid[i - 1]);
    if (!train.spike_times.empty() && t - train.spike_times.back() < options.refractory) {
      continue;
    }
    train.spike_times.push_back(t);
  }
  return train;
}

SpikeTrain detect_spikes(const SimulationResult& result, const SpikeOptions& options) {
  if (result.trajectory.empty()) throw InvalidArgument("empty trajectory");
  const std::vector<double> v = result.voltage();
  return detect_spikes(result.grid, v, options);
}

std::vector<double> current_range(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw InvalidArgument("current range bounds must be finite");
  }
  if (!(step > 0.0)) throw InvalidArgument("current range step must be positive");
  std::vector<double> values;
  for (std::size_t k = 0;; ++k) {
    const double value = start + static_cast<double>(k) * step;
    if (value > stop + 1e-9 * std::max(1.0, std::abs(stop))) break;
    values.push_back(value);
  }
  if (values.empty()) throw InvalidArgument("current range is empty");
  return values;
}

SweepTable bifurcation_sweep(std::span<const double> currents, const HHParams& params,
                             const SolverConfig& config, const SpikeOptions& spikes, double v0) {
  if (currents.empty()) throw InvalidArgument("sweep needs at least one current value");
  SweepTable table;
  table.rows.resize(currents.size());
  const State x0 = equilibrium(v0);
  parallel_for(currents.size(), [&](std::size_t i) {
    HHParams p = params;
    p.current = currents[i];
    const SimulationResult run = simulate_deterministic(x0, p, config);
    table.rows[i] = {currents[i], detect_spikes(run, spikes).count()};
  });
  for (const SweepRow& row : table.rows) {
    if (row.spike_count == 0) {
      table.rest_threshold = std::max(table.rest_threshold.value_or(row.current), row.current);
    } else if (row.spike_count == 1) {
      table.single_threshold =
          std::max(table.single_threshold.value_or(row.current), row.current);
    }
  }
  return table;
}

RegularityEstimate estimate_holder(std::span<const double> values, double dt,
                                   const HolderOptions& options) {
  if (values.size() < kMinHolderSamples) {
    std::ostringstream os;
    os << "regularity estimate needs at least " << kMinHolderSamples << " samples, got "
       << values.size();
    throw InvalidArgument(os.str());
  }
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");

  std::vector<double> log_lag;
  std::vector<double> log_stat;
  for (std::size_t j = 0; j <= options.max_log2_lag; ++j) {
    const std::size_t lag = std::size_t{1} << j;
    // Keep at least half the path in every average.
    if (2 * lag > values.size()) break;
    double sum = 0.0;
    const std::size_t terms = values.size() - lag;
    for (std::size_t i = 0; i < terms; ++i) {
      const double d = values[i + lag] - values[i];
      sum += d * d;
    }
    const double mean_sq = sum / static_cast<double>(terms);
    if (!(mean_sq > 0.0) || !std::isfinite(mean_sq)) {
      throw NumericalError("regularity estimate is undefined for a constant path");
    }
    log_lag.push_back(std::log(static_cast<double>(lag) * dt));
    log_stat.push_back(std::log(mean_sq));
  }
  if (log_lag.size() < 2) throw InvalidArgument("regularity estimate needs at least two lags");

  const double count = static_cast<double>(log_lag.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < log_lag.size(); ++i) {
    sx += log_lag[i];
    sy += log_stat[i];
    sxx += log_lag[i] * log_lag[i];
    sxy += log_lag[i] * log_stat[i];
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / count;
  double rss = 0.0;
  for (std::size_t i = 0; i < log_lag.size(); ++i) {
    const double r = log_stat[i] - (intercept + slope * log_lag[i]);
    rss += r * r;
  }

  RegularityEstimate estimate;
  estimate.slope = slope;
  estimate.exponent = std::min(slope / 2.0, 1.0);
  estimate.scales_used = log_lag.size();
  estimate.fit_residual = std::sqrt(rss / count);
  return estimate;
}

std::string_view to_string(Coordinate c) noexcept {
  switch (c) {
    case Coordinate::m: return "m";
    case Coordinate::h: return "h";
    case Coordinate::n: return "n";
    case Coordinate::v: return "V";
  }
  return "?";
}

Coordinate parse_coordinate(std::string_view name) {
  if (name == "m") return Coordinate::m;
  if (name == "h") return Coordinate::h;
  if (name == "n") return Coordinate::n;
  if (name == "V" || name == "v") return Coordinate::v;
  throw InvalidArgument("unknown coordinate '" + std::string(name) + "' (expected m, h, n or V)");
}

RegularityEstimate estimate_holder(const SimulationResult& result, Coordinate coordinate,
                                   const HolderOptions& options) {
  if (result.grid.size() < 2) throw InvalidArgument("trajectory too short");
  const int index = static_cast<int>(coordinate);
  const std::vector<double> path =
      index == 3 ? result.voltage() : result.gate(index);
  return estimate_holder(path, result.grid[1] - result.grid[0], options);
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::uint64_t recording_seed(std::uint64_t master, std::size_t k, std::size_t e) noexcept {
  return derive_seed(derive_seed(master, 0x5e7135ULL + k), e);
}

RecordingSeries simulate_recording_series(std::span<const double> hurst_sequence,
                                          const HHParams& params, const SolverConfig& config,
                                          const SeriesOptions& options) {
  if (hurst_sequence.empty()) throw InvalidArgument("Hurst sequence must not be empty");
  for (std::size_t k = 0; k < hurst_sequence.size(); ++k) {
    const double h = hurst_sequence[k];
    if (!(h > 0.5 && h < 1.0)) {
      std::ostringstream os;
      os << "recording " << k << ": H = " << h
         << " is outside ]1/2,1[, the range supported by the Euler solver "
            "(the model itself allows H > 1/4)";
      throw InvalidArgument(os.str());
    }
    if (k > 0 && h > hurst_sequence[k - 1]) {
      std::ostringstream os;
      os << "Hurst sequence must be non-increasing (H_k >= H_{k+1}): H_" << k << " = "
         << hurst_sequence[k - 1] << " < H_" << k + 1 << " = " << h;
      throw InvalidArgument(os.str());
    }
  }
  if (options.ensemble < 1) throw InvalidArgument("ensemble size must be at least 1");
  params.validate();
  if (!params.has_noise()) {
    throw InvalidArgument("recording series needs a non-zero noise amplitude");
  }

  const std::size_t recordings = hurst_sequence.size();
  const std::size_t ensemble = options.ensemble;
  RecordingSeries series;
  series.recordings.resize(recordings);
  for (std::size_t k = 0; k < recordings; ++k) {
    Recording& rec = series.recordings[k];
    rec.hurst = hurst_sequence[k];
    rec.estimates.resize(ensemble);
    rec.seeds.resize(ensemble);
  }

  const State x0 = equilibrium(options.v0);
  parallel_for(recordings * ensemble, [&](std::size_t job) {
    const std::size_t k = job / ensemble;
    const std::size_t e = job % ensemble;
    Recording& rec = series.recordings[k];
    SolverConfig cfg = config;
    cfg.hurst = rec.hurst;
    cfg.seed = recording_seed(config.seed, k, e);
    SimulationResult run = simulate(x0, params, cfg);
    rec.estimates[e] = estimate_holder(run, options.coordinate, options.holder);
    rec.seeds[e] = cfg.seed;
    if (e == 0) rec.representative = std::move(run);
  });

  for (Recording& rec : series.recordings) {
    std::vector<double> exponents, residuals;
    for (const RegularityEstimate& est : rec.estimates) {
      exponents.push_back(est.exponent);
      residuals.push_back(est.fit_residual);
    }
    rec.median_exponent = median(exponents);
    rec.median_residual = median(residuals);
  }
  return series;
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::rest: return "rest";
    case Regime::single: return "single";
    case Regime::multiple: return "multiple";
  }
  return "?";
}

std::size_t WindowLabels::distinct_labels() const {
  return std::set<Regime>(labels.begin(), labels.end()).size();
}

WindowLabels classify_windows(const SpikeTrain& spikes, double horizon, double window) {
  if (!(window > 0.0) || !(horizon > 0.0)) {
    throw InvalidArgument("window and horizon must be positive");
  }
  WindowLabels out;
  out.window = window;
  const auto count = static_cast<std::size_t>(std::floor(horizon / window + 1e-9));
  if (count == 0) throw InvalidArgument("horizon is shorter than one window");
  out.counts.assign(count, 0);
  for (double t : spikes.spike_times) {
    const auto w = static_cast<std::size_t>(std::floor(t / window));
    if (w < count) ++out.counts[w];
  }
  for (std::size_t c : out.counts) {
    out.labels.push_back(c == 0 ? Regime::rest : (c == 1 ? Regime::single : Regime::multiple));
  }
  return out;
}

StageSwitchRun stage_switch_run(const HHParams& params, const SolverConfig& config,
                                const SpikeOptions& spikes, double window, double v0) {
  StageSwitchRun run;
  run.result = simulate(equilibrium(v0), params, config);
  run.spikes = detect_spikes(run.result, spikes);
  run.windows = classify_windows(run.spikes, config.horizon, window);
  run.switched = run.windows.distinct_labels() >= 2;
  return run;
}

}  // namespace fshh
