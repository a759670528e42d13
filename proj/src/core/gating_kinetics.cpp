#include "fshh/gating_kinetics.hpp"

#include <cmath>
#include <string>

#include "fshh/error.hpp"

namespace fshh {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be finite");
  }
}

void require_finite(const State& x) {
  if (!x.finite()) throw InvalidArgument("state must be finite");
}

}  // namespace

void HHParams::validate() const {
  const double fields[] = {capacitance, current, e_na, e_k, e_l, gbar_na,
                           gbar_k, gbar_l, sigma[0], sigma[1], sigma[2]};
  for (double f : fields) require_finite(f, "parameter");
  if (!(capacitance > 0.0)) throw InvalidArgument("capacitance must be positive");
  if (gbar_na < 0.0 || gbar_k < 0.0 || gbar_l < 0.0) {
    throw InvalidArgument("maximal conductances must be non-negative");
  }
  for (double s : sigma) {
    if (s < 0.0) throw InvalidArgument("noise amplitudes must be non-negative");
  }
}

bool State::finite() const noexcept {
  return std::isfinite(m) && std::isfinite(h) && std::isfinite(n) && std::isfinite(v);
}

double exprel_ratio(double x) {
  if (std::abs(x) < kRateSeriesWindow) {
    // 10 * u / (e^u - 1) with u = x/10, expanded to fourth order.
    const double x2 = x * x;
    return 10.0 - 0.5 * x + x2 / 120.0 - x2 * x2 / 720000.0;
  }
  return x / std::expm1(x / 10.0);
}

GatingRates rates(double v) {
  require_finite(v, "voltage");
  GatingRates r;
  r.alpha_n = 0.01 * exprel_ratio(10.0 - v);
  r.beta_n = 0.125 * std::exp(-v / 80.0);
  r.alpha_m = 0.1 * exprel_ratio(25.0 - v);
  r.beta_m = 4.0 * std::exp(-v / 18.0);
  r.alpha_h = 0.07 * std::exp(-v / 20.0);
  r.beta_h = 1.0 / (std::exp((30.0 - v) / 10.0) + 1.0);
  return r;
}

double ionic_current(const State& x, const HHParams& p) {
  const double m3h = x.m * x.m * x.m * x.h;
  const double n2 = x.n * x.n;
  return p.gbar_na * m3h * (x.v - p.e_na) + p.gbar_k * n2 * n2 * (x.v - p.e_k) +
         p.gbar_l * (x.v - p.e_l);
}

Vec4 drift(const State& x, const HHParams& params) {
  require_finite(x);
  const GatingRates r = rates(x.v);
  Vec4 b{};
  for (int i = 0; i < kGateCount; ++i) {
    const double p = x.gate(i);
    b[i] = r.alpha(i) * (1.0 - p) - r.beta(i) * p;
  }
  b[3] = (params.current - ionic_current(x, params)) / params.capacitance;
  return b;
}

Diffusion diffusion(const State& x, const HHParams& params) {
  require_finite(x);
  Diffusion s{};
  for (int i = 0; i < kGateCount; ++i) {
    const double p = x.gate(i);
    s[i][i] = params.sigma[i] * p * (1.0 - p);
  }
  return s;
}

State equilibrium(double v) {
  const GatingRates r = rates(v);
  State x;
  x.m = r.alpha_m / (r.alpha_m + r.beta_m);
  x.h = r.alpha_h / (r.alpha_h + r.beta_h);
  x.n = r.alpha_n / (r.alpha_n + r.beta_n);
  x.v = v;
  return x;
}

}  // namespace fshh
