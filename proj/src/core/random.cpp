#include "fshh/random.hpp"

#include <cmath>
#include <numbers>

namespace fshh {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

NormalStream::NormalStream(std::uint64_t seed) : engine_(mix_seed(seed)) {}

double NormalStream::uniform_open_zero() {
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NormalStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform_open_zero()));
  const double angle = 2.0 * std::numbers::pi * uniform_open_zero();
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

void NormalStream::fill(std::span<double> out) {
  for (double& z : out) z = next();
}

}  // namespace fshh
