#pragma once

// Explicit Euler scheme for dX = b(X) dt + sigma(X) dB driven by three
// independent fBm copies pre-sampled on the integration grid.
//
// Gate values can leave [0,1] at the discrete level even though the
// continuous dynamics cannot. The clamp policy decides what happens then.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fshh/fbm.hpp"
#include "fshh/gating_kinetics.hpp"

namespace fshh {

enum class ClampPolicy { clamp_and_log, error_on_exit };

std::string_view to_string(ClampPolicy p) noexcept;
ClampPolicy parse_clamp_policy(std::string_view name);

// Gate excursions beyond this distance from [0,1] are a breach under
// error_on_exit.
inline constexpr double kGateExitTolerance = 1e-9;

struct SolverConfig {
  double horizon = 50.0;  // T, ms
  double dt = 0.01;       // ms
  double hurst = 0.75;    // ignored for noise-free runs
  std::uint64_t seed = 0;
  ClampPolicy clamp_policy = ClampPolicy::clamp_and_log;
  Generator generator = Generator::wood_chan;

  // round(T / dt). Throws InvalidArgument if dt does not divide T to
  // within 1e-9 relative.
  std::size_t steps() const;
  // Stochastic runs need H in ]1/2, 1[.
  void validate(bool stochastic) const;
};

struct ClampEvent {
  std::size_t step = 0;  // index of the produced state
  int coord = 0;         // 0 = m, 1 = h, 2 = n
  double pre_value = 0.0;

  friend bool operator==(const ClampEvent&, const ClampEvent&) = default;
};

struct SimulationResult {
  std::vector<double> grid;
  std::vector<State> trajectory;
  std::vector<ClampEvent> clamp_events;
  std::uint64_t driver_seed = 0;
  bool stochastic = false;
  double hurst = 0.0;
  double max_abs_v = 0.0;
  double apriori_bound = 0.0;      // may be +inf
  double log_apriori_bound = 0.0;  // always finite for positive c2
  bool bound_respected = true;
  // Extremes of gate values before the clamp policy was applied.
  double min_gate_pre_clamp = 0.0;
  double max_gate_pre_clamp = 1.0;

  std::vector<double> voltage() const;
  std::vector<double> gate(int i) const;
};

// x + b(x) dt + sigma(x) dB, no clamping.
State euler_update(const State& x, double dt, const std::array<double, 3>& db,
                   const HHParams& params);

// Euler update followed by the clamp policy. Clamped coordinates are
// appended to `clamp_log` (if non-null) with step index `step`.
// Throws ViabilityBreach under error_on_exit when a gate leaves [0,1] by more
// than kGateExitTolerance.
State step_euler(const State& x, double dt, const std::array<double, 3>& db,
                 const HHParams& params, ClampPolicy policy = ClampPolicy::clamp_and_log,
                 std::size_t step = 0, std::vector<ClampEvent>* clamp_log = nullptr);

// Full run. A driver is sampled from fbm_sampler only when some sigma_k > 0;
// with zero noise the run is identical to simulate_deterministic.
SimulationResult simulate(const State& x0, const HHParams& params, const SolverConfig& config);

// As simulate with sigma forced to zero.
SimulationResult simulate_deterministic(const State& x0, const HHParams& params,
                                        const SolverConfig& config);

// Run on a given driver. The solver uses every `stride`-th grid point of
// the driver, so dt = driver_dt * stride and the coarse driver is the
// restriction of the fine one.
SimulationResult simulate_on_driver(const State& x0, const HHParams& params,
                                    const SolverConfig& config, const MultiFbmPath& driver,
                                    std::size_t stride = 1);

struct ConvergenceRow {
  double dt = 0.0;
  double gap_to_finest = 0.0;    // sup over shared grid points and coordinates
  double gap_to_next = 0.0;      // same, against the next finer entry
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // coarsest first, finest excluded
  // Least-squares slope of log(gap_to_next) against log(dt). NaN with fewer
  // than two rows.
  double observed_order = 0.0;
};

// Refinement study on one common noise path: the finest driver is sampled
// once and each coarser run uses its restriction. dt_list must be dyadically
// nested (each entry a power-of-two multiple of the finest) and every entry
// must divide the horizon. Noise-free when all sigma_k are zero.
ConvergenceTable convergence_probe(const State& x0, const HHParams& params, double horizon,
                                   double hurst, std::uint64_t seed,
                                   std::span<const double> dt_list);

}  // namespace fshh
