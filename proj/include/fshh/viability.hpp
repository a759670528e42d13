#pragma once

// Boundary viability of K = [0,1]^3 x R for the pair (drift, diffusion),
// and the Gronwall a-priori bound on the voltage.
//
// For a box the normal cone at a boundary point is generated by the signed
// axes of the active faces, so checking <s, b> <= 0 and <s, sigma_k> = 0 on
// the generators is equivalent to checking them on the whole cone. The
// diffusion must also have an identically zero voltage row; that structural
// condition is checked at every sampled point as well.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fshh/gating_kinetics.hpp"

namespace fshh {

// Generators {-e_i : p_i = 0} U {+e_i : p_i = 1} over gate indices.
// Empty for interior points.
std::vector<Vec4> normal_cone_generators(const State& x);

struct BoundarySamplingPlan {
  std::vector<double> voltages;          // default -50..150 step 10
  std::vector<double> interior_values;   // default {0.1, 0.3, 0.5, 0.7, 0.9}

  static BoundarySamplingPlan standard();

  // Every gate triple with each coordinate in {0, 1} U interior_values and at
  // least one coordinate in {0, 1}: all faces, edges and corners.
  std::vector<State> boundary_points() const;
};

struct ViabilityReport {
  std::size_t points_checked = 0;
  double max_drift_violation = -std::numeric_limits<double>::infinity();
  double max_diffusion_violation = 0.0;
  bool pass = false;
  std::optional<State> worst_point;
  Vec4 worst_generator{};  // zero when the worst point is a row-4 violation

  std::string to_text() const;
};

inline constexpr double kViabilityTolerance = 1e-12;

using DriftFn = std::function<Vec4(const State&)>;
using DiffusionFn = std::function<Diffusion(const State&)>;

ViabilityReport check_viability(const DriftFn& drift_fn, const DiffusionFn& diffusion_fn,
                                const BoundarySamplingPlan& plan = BoundarySamplingPlan::standard());

ViabilityReport check_viability(const HHParams& params,
                                const BoundarySamplingPlan& plan = BoundarySamplingPlan::standard());

// c1 with |b_V(p, v)| <= c1 (1 + |p| + |v|) on K:
// (1/C) max(|I| + gNa|ENa| + gK|EK| + gL|EL|, gNa + gK + gL).
double linear_growth_constant(const HHParams& params);

// log of c2 e^{c1 T} with c2 = |V0| + c1 T (1 + sqrt 3). Finite even when the
// bound itself overflows a double.
double log_apriori_voltage_bound(const HHParams& params, const State& x0, double horizon);

// c2 e^{c1 T}; +inf when it exceeds the double range.
double apriori_voltage_bound(const HHParams& params, const State& x0, double horizon);

}  // namespace fshh
