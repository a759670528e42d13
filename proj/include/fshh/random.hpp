#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace fshh {

// SplitMix64 finaliser. Used to spread user seeds and to derive
// statistically disjoint sub-seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

// Sub-seed for stream `stream` of `master`. Distinct streams of one master
// never share a generator state in practice.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

// Standard normal variates from mt19937_64 through the Box-Muller transform.
// The engine and transform are both fully specified, so a seed gives the
// same sequence with every standard library.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed);

  double next();
  void fill(std::span<double> out);

 private:
  // Uniform on (0, 1], 53-bit resolution.
  double uniform_open_zero();

  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace fshh
