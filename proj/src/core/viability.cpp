#include "fshh/viability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fshh/error.hpp"

namespace fshh {

std::vector<Vec4> normal_cone_generators(const State& x) {
  std::vector<Vec4> generators;
  for (int i = 0; i < kGateCount; ++i) {
    Vec4 s{};
    if (x.gate(i) == 0.0) {
      s[i] = -1.0;
      generators.push_back(s);
    } else if (x.gate(i) == 1.0) {
      s[i] = 1.0;
      generators.push_back(s);
    }
  }
  return generators;
}

BoundarySamplingPlan BoundarySamplingPlan::standard() {
  BoundarySamplingPlan plan;
  for (int v = -50; v <= 150; v += 10) plan.voltages.push_back(v);
  plan.interior_values = {0.1, 0.3, 0.5, 0.7, 0.9};
  return plan;
}

std::vector<State> BoundarySamplingPlan::boundary_points() const {
  std::vector<double> coords = {0.0, 1.0};
  coords.insert(coords.end(), interior_values.begin(), interior_values.end());
  auto on_face = [](double c) { return c == 0.0 || c == 1.0; };

  std::vector<State> points;
  for (double m : coords) {
    for (double h : coords) {
      for (double n : coords) {
        if (!on_face(m) && !on_face(h) && !on_face(n)) continue;
        for (double v : voltages) points.push_back(State{m, h, n, v});
      }
    }
  }
  return points;
}

std::string ViabilityReport::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "points_checked = " << points_checked << '\n'
     << "max_drift_violation = " << max_drift_violation << '\n'
     << "max_diffusion_violation = " << max_diffusion_violation << '\n'
     << "pass = " << (pass ? "true" : "false") << '\n';
  if (worst_point) {
    os << "worst_point = (" << worst_point->m << ", " << worst_point->h << ", "
       << worst_point->n << ", " << worst_point->v << ")\n";
    if (worst_generator == Vec4{}) {
      os << "worst_check = voltage_row\n";
    } else {
      os << "worst_check = normal_cone\n"
         << "worst_generator = (" << worst_generator[0] << ", " << worst_generator[1] << ", "
         << worst_generator[2] << ", " << worst_generator[3] << ")\n";
    }
  }
  return os.str();
}

ViabilityReport check_viability(const DriftFn& drift_fn, const DiffusionFn& diffusion_fn,
                                const BoundarySamplingPlan& plan) {
  ViabilityReport report;
  // Worst offender ranked by how far it exceeds its own tolerance.
  double worst_excess = -std::numeric_limits<double>::infinity();
  auto consider = [&](double excess, const State& x, const Vec4& s) {
    if (excess > worst_excess) {
      worst_excess = excess;
      report.worst_point = x;
      report.worst_generator = s;
    }
  };

  for (const State& x : plan.boundary_points()) {
    ++report.points_checked;
    const Vec4 b = drift_fn(x);
    const Diffusion sigma = diffusion_fn(x);

    double row4 = 0.0;
    for (int k = 0; k < 3; ++k) row4 = std::max(row4, std::abs(sigma[3][k]));
    report.max_diffusion_violation = std::max(report.max_diffusion_violation, row4);
    consider(row4 - kViabilityTolerance, x, Vec4{});

    for (const Vec4& s : normal_cone_generators(x)) {
      double sb = 0.0;
      for (int i = 0; i < 4; ++i) sb += s[i] * b[i];
      report.max_drift_violation = std::max(report.max_drift_violation, sb);
      consider(sb - kViabilityTolerance, x, s);

      for (int k = 0; k < 3; ++k) {
        double s_sigma = 0.0;
        for (int i = 0; i < 4; ++i) s_sigma += s[i] * sigma[i][k];
        const double violation = std::abs(s_sigma);
        report.max_diffusion_violation = std::max(report.max_diffusion_violation, violation);
        consider(violation - kViabilityTolerance, x, s);
      }
    }
  }
  report.pass = report.points_checked > 0 &&
                report.max_drift_violation <= kViabilityTolerance &&
                report.max_diffusion_violation <= kViabilityTolerance;
  return report;
}

ViabilityReport check_viability(const HHParams& params, const BoundarySamplingPlan& plan) {
  params.validate();
  return check_viability([&](const State& x) { return drift(x, params); },
                         [&](const State& x) { return diffusion(x, params); }, plan);
}

double linear_growth_constant(const HHParams& p) {
  p.validate();
  const double affine = std::abs(p.current) + p.gbar_na * std::abs(p.e_na) +
                        p.gbar_k * std::abs(p.e_k) + p.gbar_l * std::abs(p.e_l);
  const double slope = p.gbar_na + p.gbar_k + p.gbar_l;
  return std::max(affine, slope) / p.capacitance;
}

double log_apriori_voltage_bound(const HHParams& params, const State& x0, double horizon) {
  if (!x0.finite() || !x0.gates_in_unit_box()) {
    throw InvalidArgument("initial state must lie in [0,1]^3 x R");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("horizon must be positive and finite");
  }
  const double c1 = linear_growth_constant(params);
  // The gate block is bounded by sqrt(3) on the unit cube.
  const double gate_bound = std::numbers::sqrt3;
  const double c2 = std::abs(x0.v) + c1 * horizon * (1.0 + gate_bound);
  return std::log(c2) + c1 * horizon;
}

double apriori_voltage_bound(const HHParams& params, const State& x0, double horizon) {
  return std::exp(log_apriori_voltage_bound(params, x0, horizon));
}

}  // namespace fshh
