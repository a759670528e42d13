#pragma once

// Post-processing and scenario drivers: spike detection, the bifurcation
// sweep over the applied current, Holder-exponent estimation, recording
// series with decreasing Hurst parameter, and windowed regime labelling.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fshh/gating_kinetics.hpp"
#include "fshh/solver.hpp"

namespace fshh {

struct SpikeOptions {
  double threshold = 50.0;  // mV
  double refractory = 2.0;  // ms
};

struct SpikeTrain {
  std::vector<double> spike_times;  // ms, strictly increasing
  double threshold = 0.0;
  double refractory = 0.0;

  std::size_t count() const noexcept { return spike_times.size(); }
};

// Upward threshold crossings, timed by linear interpolation between grid
// points. A crossing closer than `refractory` to the previous accepted
// spike is ignored.
SpikeTrain detect_spikes(std::span<const double> grid, std::span<const double> voltage,
                         const SpikeOptions& options = {});
SpikeTrain detect_spikes(const SimulationResult& result, const SpikeOptions& options = {});

struct SweepRow {
  double current = 0.0;
  std::size_t spike_count = 0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  // Largest current with no spike, and largest current with exactly one.
  std::optional<double> rest_threshold;
  std::optional<double> single_threshold;
};

// start, start + step, ... up to and including stop (with 1e-9 slack).
std::vector<double> current_range(double start, double stop, double step);

// One noise-free run per current from equilibrium(v0).
SweepTable bifurcation_sweep(std::span<const double> currents, const HHParams& params,
                             const SolverConfig& config, const SpikeOptions& spikes = {},
                             double v0 = 0.0);

struct HolderOptions {
  // Lags 1, 2, 4, ..., 2^max_log2_lag grid steps.
  std::size_t max_log2_lag = 4;
};

inline constexpr std::size_t kMinHolderSamples = 256;

struct RegularityEstimate {
  double exponent = 0.0;  // slope / 2, capped at 1
  double slope = 0.0;     // raw log-log slope
  std::size_t scales_used = 0;
  double fit_residual = 0.0;  // RMS residual of the log-log fit
};

// Log-log regression of the mean squared increment at dyadic lags against
// the lag in time units. Throws NumericalError for constant paths and
// InvalidArgument for fewer than kMinHolderSamples samples.
RegularityEstimate estimate_holder(std::span<const double> values, double dt,
                                   const HolderOptions& options = {});

// State coordinate whose path feeds the regularity estimate.
enum class Coordinate { m = 0, h = 1, n = 2, v = 3 };
std::string_view to_string(Coordinate c) noexcept;
Coordinate parse_coordinate(std::string_view name);

RegularityEstimate estimate_holder(const SimulationResult& result, Coordinate coordinate,
                                   const HolderOptions& options = {});

struct SeriesOptions {
  std::size_t ensemble = 20;  // independent runs per recording
  Coordinate coordinate = Coordinate::n;
  HolderOptions holder;
  double v0 = 0.0;
};

struct Recording {
  double hurst = 0.0;
  SimulationResult representative;  // ensemble member 0
  std::vector<RegularityEstimate> estimates;
  std::vector<std::uint64_t> seeds;
  double median_exponent = 0.0;
  double median_residual = 0.0;
};

struct RecordingSeries {
  std::vector<Recording> recordings;
};

// Seed of ensemble member e of recording k under master seed s.
std::uint64_t recording_seed(std::uint64_t master, std::size_t k, std::size_t e) noexcept;

// Every recording gets fresh independent noise. The Hurst sequence must be
// non-increasing with every entry in ]1/2, 1[.
RecordingSeries simulate_recording_series(std::span<const double> hurst_sequence,
                                          const HHParams& params, const SolverConfig& config,
                                          const SeriesOptions& options = {});

double median(std::vector<double> values);

enum class Regime { rest, single, multiple };
std::string_view to_string(Regime r) noexcept;

struct WindowLabels {
  double window = 0.0;
  std::vector<std::size_t> counts;
  std::vector<Regime> labels;

  std::size_t distinct_labels() const;
};

// Spike counts over consecutive windows [w W, (w+1) W) covering [0, horizon);
// a trailing partial window is dropped. 0 -> rest, 1 -> single, >= 2 ->
// multiple.
WindowLabels classify_windows(const SpikeTrain& spikes, double horizon, double window);

struct StageSwitchRun {
  SimulationResult result;
  SpikeTrain spikes;
  WindowLabels windows;
  bool switched = false;  // at least two distinct labels
};

StageSwitchRun stage_switch_run(const HHParams& params, const SolverConfig& config,
                                const SpikeOptions& spikes = {}, double window = 50.0,
                                double v0 = 0.0);

}  // namespace fshh
