#include "fshh/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "fshh/error.hpp"
#include "fshh/viability.hpp"

namespace fshh {

std::string_view to_string(ClampPolicy p) noexcept {
  return p == ClampPolicy::error_on_exit ? "error_on_exit" : "clamp_and_log";
}

ClampPolicy parse_clamp_policy(std::string_view name) {
  if (name == "clamp_and_log") return ClampPolicy::clamp_and_log;
  if (name == "error_on_exit") return ClampPolicy::error_on_exit;
  throw InvalidArgument("unknown clamp policy '" + std::string(name) +
                        "' (expected clamp_and_log or error_on_exit)");
}

std::size_t SolverConfig::steps() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("horizon T must be positive and finite");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive and finite");
  const double ratio = horizon / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "dt = " << dt << " does not divide T = " << horizon;
    throw InvalidArgument(os.str());
  }
  return static_cast<std::size_t>(rounded);
}

void SolverConfig::validate(bool stochastic) const {
  (void)steps();
  if (stochastic && !(hurst > 0.5 && hurst < 1.0)) {
    std::ostringstream os;
    os << "stochastic runs need a Hurst parameter in ]1/2,1[ (explicit Euler is a "
          "Young scheme), got "
       << hurst;
    throw InvalidArgument(os.str());
  }
}

std::vector<double> SimulationResult::voltage() const {
  std::vector<double> out;
  out.reserve(trajectory.size());
  for (const State& x : trajectory) out.push_back(x.v);
  return out;
}

std::vector<double> SimulationResult::gate(int i) const {
  std::vector<double> out;
  out.reserve(trajectory.size());
  for (const State& x : trajectory) out.push_back(x.gate(i));
  return out;
}

State euler_update(const State& x, double dt, const std::array<double, 3>& db,
                   const HHParams& params) {
  const Vec4 b = drift(x, params);
  State next = x;
  for (int i = 0; i < kStateDim; ++i) next[i] += b[i] * dt;
  // The diffusion is diagonal in the gate block with a zero voltage row.
  for (int i = 0; i < kGateCount; ++i) {
    const double p = x.gate(i);
    next.gate(i) += params.sigma[i] * p * (1.0 - p) * db[i];
  }
  return next;
}

namespace {

State apply_clamp(State next, ClampPolicy policy, std::size_t step,
                  std::vector<ClampEvent>* clamp_log) {
  for (int i = 0; i < kGateCount; ++i) {
    const double p = next.gate(i);
    if (p >= 0.0 && p <= 1.0) continue;
    if (policy == ClampPolicy::error_on_exit &&
        (p < -kGateExitTolerance || p > 1.0 + kGateExitTolerance)) {
      std::ostringstream os;
      os.precision(17);
      os << "gate " << "mhn"[i] << " left [0,1] at step " << step << " (value " << p << ")";
      throw ViabilityBreach(os.str(), step, i, p);
    }
    if (clamp_log != nullptr) clamp_log->push_back({step, i, p});
    next.gate(i) = std::clamp(p, 0.0, 1.0);
  }
  return next;
}

}  // namespace

State step_euler(const State& x, double dt, const std::array<double, 3>& db,
                 const HHParams& params, ClampPolicy policy, std::size_t step,
                 std::vector<ClampEvent>* clamp_log) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  return apply_clamp(euler_update(x, dt, db, params), policy, step, clamp_log);
}

namespace {

void require_viable_start(const State& x0) {
  if (!x0.finite() || !x0.gates_in_unit_box()) {
    throw InvalidArgument("initial state must lie in [0,1]^3 x R");
  }
}

// Core loop. `increment(k)` returns dB for step k.
template <typename IncrementFn>
SimulationResult integrate(const State& x0, const HHParams& params, const SolverConfig& config,
                           std::size_t steps, IncrementFn&& increment) {
  SimulationResult result;
  result.grid.resize(steps + 1);
  result.trajectory.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    result.grid[k] = config.horizon * static_cast<double>(k) / static_cast<double>(steps);
  }
  const double dt = config.horizon / static_cast<double>(steps);

  State x = x0;
  result.trajectory[0] = x;
  double min_gate = std::min({x.m, x.h, x.n});
  double max_gate = std::max({x.m, x.h, x.n});
  double max_abs_v = std::abs(x.v);

  for (std::size_t k = 0; k < steps; ++k) {
    const State raw = euler_update(x, dt, increment(k), params);
    if (!raw.finite()) {
      std::ostringstream os;
      os << "state became non-finite at step " << k + 1;
      throw NumericalError(os.str(), k + 1);
    }
    min_gate = std::min({min_gate, raw.m, raw.h, raw.n});
    max_gate = std::max({max_gate, raw.m, raw.h, raw.n});
    x = apply_clamp(raw, config.clamp_policy, k + 1, &result.clamp_events);
    max_abs_v = std::max(max_abs_v, std::abs(x.v));
    result.trajectory[k + 1] = x;
  }

  result.min_gate_pre_clamp = min_gate;
  result.max_gate_pre_clamp = max_gate;
  result.max_abs_v = max_abs_v;
  result.log_apriori_bound = log_apriori_voltage_bound(params, x0, config.horizon);
  result.apriori_bound = apriori_voltage_bound(params, x0, config.horizon);
  result.bound_respected = max_abs_v <= result.apriori_bound;
  return result;
}

}  // namespace

SimulationResult simulate_on_driver(const State& x0, const HHParams& params,
                                    const SolverConfig& config, const MultiFbmPath& driver,
                                    std::size_t stride) {
  params.validate();
  require_viable_start(x0);
  config.validate(true);
  const std::size_t steps = config.steps();
  if (stride < 1 || driver.steps() != steps * stride) {
    throw InvalidArgument("driver grid does not match the solver grid");
  }
  SimulationResult result = integrate(x0, params, config, steps, [&](std::size_t k) {
    return driver.increment(k, stride);
  });
  result.stochastic = true;
  result.hurst = driver.hurst();
  result.driver_seed = driver.master_seed;
  return result;
}

SimulationResult simulate(const State& x0, const HHParams& params, const SolverConfig& config) {
  params.validate();
  require_viable_start(x0);
  if (!params.has_noise()) return simulate_deterministic(x0, params, config);
  config.validate(true);
  const std::size_t steps = config.steps();
  const MultiFbmPath driver =
      sample_driver(steps, config.horizon, config.hurst, config.seed, config.generator);
  return simulate_on_driver(x0, params, config, driver, 1);
}

SimulationResult simulate_deterministic(const State& x0, const HHParams& params,
                                        const SolverConfig& config) {
  params.validate();
  require_viable_start(x0);
  config.validate(false);
  HHParams quiet = params;
  quiet.sigma = {0.0, 0.0, 0.0};
  const std::array<double, 3> zero{};
  SimulationResult result =
      integrate(x0, quiet, config, config.steps(), [&](std::size_t) { return zero; });
  result.driver_seed = config.seed;
  return result;
}

namespace {

double sup_gap(const SimulationResult& coarse, const SimulationResult& fine) {
  const std::size_t ratio = (fine.trajectory.size() - 1) / (coarse.trajectory.size() - 1);
  double gap = 0.0;
  for (std::size_t k = 0; k < coarse.trajectory.size(); ++k) {
    const State& a = coarse.trajectory[k];
    const State& b = fine.trajectory[k * ratio];
    for (int i = 0; i < kStateDim; ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  }
  return gap;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

ConvergenceTable convergence_probe(const State& x0, const HHParams& params, double horizon,
                                   double hurst, std::uint64_t seed,
                                   std::span<const double> dt_list) {
  ConvergenceTable table;
  table.observed_order = std::numeric_limits<double>::quiet_NaN();
  if (dt_list.empty()) throw InvalidArgument("dt_list must not be empty");

  std::vector<double> dts(dt_list.begin(), dt_list.end());
  std::sort(dts.begin(), dts.end(), std::greater<>());
  const double finest = dts.back();

  SolverConfig base;
  base.horizon = horizon;
  base.hurst = hurst;
  base.seed = seed;
  base.dt = finest;
  const std::size_t fine_steps = base.steps();

  std::vector<std::size_t> strides;
  for (double dt : dts) {
    const double ratio = dt / finest;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * ratio ||
        !is_power_of_two(static_cast<std::size_t>(rounded))) {
      std::ostringstream os;
      os << "dt_list is not dyadically nested: " << dt << " / " << finest
         << " is not a power of two";
      throw InvalidArgument(os.str());
    }
    const auto stride = static_cast<std::size_t>(rounded);
    if (fine_steps % stride != 0) {
      throw InvalidArgument("every dt in dt_list must divide the horizon");
    }
    strides.push_back(stride);
  }
  for (std::size_t i = 1; i < strides.size(); ++i) {
    if (strides[i] == strides[i - 1]) throw InvalidArgument("dt_list has duplicate entries");
  }
  if (dts.size() == 1) return table;

  std::vector<SimulationResult> runs;
  runs.reserve(dts.size());
  if (params.has_noise()) {
    base.validate(true);
    const MultiFbmPath driver = sample_driver(fine_steps, horizon, hurst, seed);
    for (std::size_t i = 0; i < dts.size(); ++i) {
      SolverConfig cfg = base;
      cfg.dt = horizon / static_cast<double>(fine_steps / strides[i]);
      runs.push_back(simulate_on_driver(x0, params, cfg, driver, strides[i]));
    }
  } else {
    for (std::size_t i = 0; i < dts.size(); ++i) {
      SolverConfig cfg = base;
      cfg.dt = horizon / static_cast<double>(fine_steps / strides[i]);
      runs.push_back(simulate_deterministic(x0, params, cfg));
    }
  }

  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    ConvergenceRow row;
    row.dt = dts[i];
    row.gap_to_finest = sup_gap(runs[i], runs.back());
    row.gap_to_next = sup_gap(runs[i], runs[i + 1]);
    table.rows.push_back(row);
  }

  if (table.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double count = static_cast<double>(table.rows.size());
    for (const ConvergenceRow& row : table.rows) {
      const double lx = std::log(row.dt);
      const double ly = std::log(row.gap_to_next);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    table.observed_order = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  }
  return table;
}

}  // namespace fshh
