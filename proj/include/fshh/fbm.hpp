#pragma once

// Fractional Brownian motion on a uniform grid.
//
// Two exact-in-distribution generators are provided:
//  * wood_chan: circulant embedding of the fractional Gaussian noise
//    autocovariance, diagonalised by FFT. O(N log N) per path.
//  * cholesky: lower-triangular factor of the increment covariance.
//    O(N^2) per path after an O(N^3) factorisation; used as the reference.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "fshh/random.hpp"

namespace fshh {

enum class Generator { wood_chan, cholesky };

std::string_view to_string(Generator g) noexcept;
// Accepts "wood_chan" and "cholesky"; throws InvalidArgument otherwise.
Generator parse_generator(std::string_view name);

// cov(B(s), B(t)) = (|s|^2H + |t|^2H - |t-s|^2H) / 2.
double fbm_covariance(double s, double t, double hurst);

// Autocovariance of unit-step fractional Gaussian noise at integer lag k:
// (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2.
double fgn_autocovariance(std::size_t lag, double hurst);

struct FbmPath {
  double hurst = 0.5;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  Generator generator = Generator::wood_chan;
  std::vector<double> values;  // values[0] == 0, size steps()+1

  std::size_t steps() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double dt() const noexcept { return horizon / static_cast<double>(steps()); }
  double time(std::size_t i) const noexcept { return horizon * static_cast<double>(i) / static_cast<double>(steps()); }
  double increment(std::size_t k) const { return values[k + 1] - values[k]; }
};

// Three independent copies of one fBm on a common grid.
struct MultiFbmPath {
  std::array<FbmPath, 3> components;
  std::uint64_t master_seed = 0;

  std::size_t steps() const noexcept { return components[0].steps(); }
  double horizon() const noexcept { return components[0].horizon; }
  double hurst() const noexcept { return components[0].hurst; }
  double time(std::size_t i) const noexcept { return components[0].time(i); }

  // (B_k(t_{i+stride}) - B_k(t_i)) for k = 1..3, with i = step * stride.
  std::array<double, 3> increment(std::size_t step, std::size_t stride = 1) const {
    const std::size_t i = step * stride;
    return {components[0].values[i + stride] - components[0].values[i],
            components[1].values[i + stride] - components[1].values[i],
            components[2].values[i + stride] - components[2].values[i]};
  }
};

// Circulant embedding of a stationary Gaussian sequence of length n with the
// given autocovariance. The first circulant row has length 2M where M is the
// smallest power of two >= n; M is doubled (up to 64 n) while an eigenvalue is
// below -1e-9 * max eigenvalue. Remaining small negative eigenvalues are
// clipped to zero.
//
// One instance owns FFT buffers and is not safe for concurrent sample() calls.
class CirculantEmbedding {
 public:
  using Autocovariance = std::function<double(std::size_t)>;

  CirculantEmbedding(std::size_t n, const Autocovariance& autocov);
  ~CirculantEmbedding();
  CirculantEmbedding(CirculantEmbedding&&) noexcept;
  CirculantEmbedding& operator=(CirculantEmbedding&&) noexcept;

  std::size_t size() const noexcept;
  std::size_t embedding_size() const noexcept;

  // Writes one draw of the length-n sequence to out.
  void sample(NormalStream& normals, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Lower Cholesky factor of the n x n Toeplitz matrix built from autocov.
// Throws NumericalError carrying the zero-based index of the first
// non-positive pivot.
class ToeplitzCholesky {
 public:
  ToeplitzCholesky(std::size_t n, const std::function<double(std::size_t)>& autocov);

  std::size_t size() const noexcept { return n_; }
  void sample(NormalStream& normals, std::span<double> out) const;
  // Entry (i, j) of the factor, i >= j.
  double factor(std::size_t i, std::size_t j) const { return lower_[j * n_ + i]; }

 private:
  std::size_t n_;
  std::vector<double> lower_;  // column-major
};

// Reusable fBm path sampler for a fixed (N, H, generator). Setup cost
// (eigenvalues or factorisation) is paid once; each path costs one draw.
class FbmSampler {
 public:
  FbmSampler(std::size_t steps, double hurst, Generator generator);
  ~FbmSampler();
  FbmSampler(FbmSampler&&) noexcept;
  FbmSampler& operator=(FbmSampler&&) noexcept;

  std::size_t steps() const noexcept { return steps_; }
  double hurst() const noexcept { return hurst_; }
  Generator generator() const noexcept { return generator_; }

  // Unit-step fractional Gaussian noise (variance 1) for this seed.
  void sample_noise(std::uint64_t seed, std::span<double> out);
  FbmPath sample(double horizon, std::uint64_t seed);

 private:
  std::size_t steps_;
  double hurst_;
  Generator generator_;
  std::unique_ptr<CirculantEmbedding> embedding_;
  std::unique_ptr<ToeplitzCholesky> cholesky_;
};

FbmPath sample_cholesky(std::size_t steps, double horizon, double hurst, std::uint64_t seed);
FbmPath sample_wood_chan(std::size_t steps, double horizon, double hurst, std::uint64_t seed);

// Component k uses derive_seed(master_seed, k).
MultiFbmPath sample_driver(std::size_t steps, double horizon, double hurst,
                           std::uint64_t master_seed,
                           Generator generator = Generator::wood_chan);

}  // namespace fshh
