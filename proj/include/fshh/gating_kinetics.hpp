#pragma once

// Hodgkin-Huxley rate functions, drift vector field, multiplicative
// diffusion matrix and voltage-conditional equilibria.
//
// Units: time in ms, voltage in mV (displacement from rest), current in
// uA/cm^2, conductance in mS/cm^2, capacitance in uF/cm^2.

#include <array>

namespace fshh {

struct HHParams {
  double capacitance = 1.0;  // C
  double current = 10.0;     // I
  double e_na = 115.0;
  double e_k = -12.0;
  double e_l = 10.6;
  double gbar_na = 120.0;
  double gbar_k = 36.0;
  double gbar_l = 0.3;
  std::array<double, 3> sigma{0.0, 0.0, 0.0};  // noise amplitudes for m, h, n

  // Throws InvalidArgument unless C > 0, conductances >= 0, sigma_k >= 0
  // and every field is finite.
  void validate() const;

  bool has_noise() const noexcept {
    return sigma[0] != 0.0 || sigma[1] != 0.0 || sigma[2] != 0.0;
  }
};

inline constexpr int kGateCount = 3;
inline constexpr int kStateDim = 4;

// X = (m, h, n, V). The ordering is part of the file formats.
struct State {
  double m = 0.0;
  double h = 0.0;
  double n = 0.0;
  double v = 0.0;

  double gate(int i) const { return i == 0 ? m : (i == 1 ? h : n); }
  double& gate(int i) { return i == 0 ? m : (i == 1 ? h : n); }
  double operator[](int i) const { return i == 3 ? v : gate(i); }
  double& operator[](int i) { return i == 3 ? v : gate(i); }

  bool gates_in_unit_box() const noexcept {
    return m >= 0.0 && m <= 1.0 && h >= 0.0 && h <= 1.0 && n >= 0.0 && n <= 1.0;
  }
  bool finite() const noexcept;

  friend bool operator==(const State&, const State&) = default;
};

using Vec4 = std::array<double, 4>;

// 4x3 matrix, row-major: diffusion[row][column]. Column k multiplies dB_k.
using Diffusion = std::array<std::array<double, 3>, 4>;

struct GatingRates {
  double alpha_m = 0.0;
  double beta_m = 0.0;
  double alpha_h = 0.0;
  double beta_h = 0.0;
  double alpha_n = 0.0;
  double beta_n = 0.0;

  double alpha(int gate) const { return gate == 0 ? alpha_m : (gate == 1 ? alpha_h : alpha_n); }
  double beta(int gate) const { return gate == 0 ? beta_m : (gate == 1 ? beta_h : beta_n); }
};

// Width of the window around v = 10 (alpha_n) and v = 25 (alpha_m) where
// x / (exp(x/10) - 1) is evaluated from its Taylor series.
inline constexpr double kRateSeriesWindow = 1e-4;

// x / (exp(x/10) - 1), continuous through x = 0 where it equals 10.
double exprel_ratio(double x);

GatingRates rates(double v);

Vec4 drift(const State& x, const HHParams& params);

// diag(sigma_k p_k (1 - p_k)) stacked over a zero voltage row.
Diffusion diffusion(const State& x, const HHParams& params);

// Gates at alpha/(alpha+beta) for the given voltage.
State equilibrium(double v);

// Ionic current density I_Na + I_K + I_L at state x. The applied current
// making x a fixed point of the voltage equation equals this value.
double ionic_current(const State& x, const HHParams& params);

}  // namespace fshh
