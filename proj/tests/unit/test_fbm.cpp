#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "fshh/error.hpp"
#include "fshh/fbm.hpp"
#include "fshh/random.hpp"

using namespace fshh;

namespace {

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

// Sample mean of x and the standard error of that mean.
Moments mean_and_se(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

TEST_CASE("closed-form covariance") {
  CHECK(fbm_covariance(1.0, 2.0, 0.75) == doctest::Approx(1.4142135623730950488).epsilon(1e-15));
  CHECK(fbm_covariance(2.0, 1.0, 0.75) == fbm_covariance(1.0, 2.0, 0.75));
  CHECK(fbm_covariance(0.0, 3.0, 0.3) == 0.0);
  for (double h : {0.1, 0.5, 0.9}) {
    CHECK(fbm_covariance(2.5, 2.5, h) == doctest::Approx(std::pow(2.5, 2 * h)));
  }
  // H = 1/2 is Brownian motion: cov = min(s, t).
  CHECK(fbm_covariance(0.7, 1.9, 0.5) == doctest::Approx(0.7));
  CHECK_THROWS_AS(fbm_covariance(1.0, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(fbm_covariance(1.0, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("fractional Gaussian noise autocovariance") {
  for (double h : {0.2, 0.5, 0.8}) CHECK(fgn_autocovariance(0, h) == doctest::Approx(1.0));
  for (std::size_t k = 1; k < 6; ++k) CHECK(fgn_autocovariance(k, 0.5) == doctest::Approx(0.0));
  CHECK(fgn_autocovariance(1, 0.8) > 0.0);
  CHECK(fgn_autocovariance(1, 0.2) < 0.0);
  // gamma(1) = 2^{2H-1} - 1.
  CHECK(fgn_autocovariance(1, 0.75) == doctest::Approx(std::sqrt(2.0) - 1.0));
}

TEST_CASE("generator names round-trip") {
  for (Generator g : {Generator::wood_chan, Generator::cholesky}) {
    CHECK(parse_generator(to_string(g)) == g);
  }
  CHECK_THROWS_AS(parse_generator("davies_harte"), InvalidArgument);
}

TEST_CASE("path layout and determinism") {
  for (Generator g : {Generator::wood_chan, Generator::cholesky}) {
    FbmSampler sampler(100, 0.7, g);
    const FbmPath a = sampler.sample(5.0, 11);
    const FbmPath b = sampler.sample(5.0, 11);
    const FbmPath c = sampler.sample(5.0, 12);
    CHECK(a.values.size() == 101);
    CHECK(a.values[0] == 0.0);
    CHECK(a.steps() == 100);
    CHECK(a.dt() == doctest::Approx(0.05));
    CHECK(a.time(100) == 5.0);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.generator == g);
  }
  const MultiFbmPath d = sample_driver(64, 1.0, 0.6, 5);
  CHECK(d.components[0].values != d.components[1].values);
  CHECK(d.components[1].values != d.components[2].values);
  CHECK(d.components[1].seed == derive_seed(5, 1));
  const auto inc = d.increment(3, 2);
  CHECK(inc[2] == d.components[2].values[8] - d.components[2].values[6]);
}

TEST_CASE("invalid sampler arguments") {
  CHECK_THROWS_AS(FbmSampler(0, 0.7, Generator::wood_chan), InvalidArgument);
  CHECK_THROWS_AS(FbmSampler(10, 1.2, Generator::wood_chan), InvalidArgument);
  CHECK_THROWS_AS(FbmSampler(10, 0.0, Generator::cholesky), InvalidArgument);
  FbmSampler ok(10, 0.7, Generator::wood_chan);
  CHECK_THROWS_AS(ok.sample(-1.0, 0), InvalidArgument);
  std::vector<double> wrong(9);
  CHECK_THROWS_AS(ok.sample_noise(0, wrong), InvalidArgument);
}

TEST_CASE("single step: variance of B(T) is T^{2H}") {
  const double horizon = 2.0, h = 0.75;
  for (Generator g : {Generator::wood_chan, Generator::cholesky}) {
    FbmSampler sampler(1, h, g);
    std::vector<double> squares;
    squares.reserve(100000);
    for (std::uint64_t seed = 0; seed < 100000; ++seed) {
      const double x = sampler.sample(horizon, seed).values[1];
      squares.push_back(x * x);
    }
    const Moments m = mean_and_se(squares);
    CHECK(std::abs(m.mean - std::pow(horizon, 2 * h)) < 3.0 * m.se);
  }
}

TEST_CASE("Brownian case has uncorrelated increments") {
  FbmSampler sampler(1 << 16, 0.5, Generator::wood_chan);
  std::vector<double> noise(sampler.steps());
  sampler.sample_noise(3, noise);
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i + 1 < noise.size(); ++i) {
    s0 += noise[i] * noise[i];
    s1 += noise[i] * noise[i + 1];
  }
  const double rho = s1 / s0;
  CHECK(std::abs(rho) < 3.0 / std::sqrt(static_cast<double>(noise.size())));
}

TEST_CASE("components are uncorrelated at the horizon") {
  std::vector<double> p01, p02, p12;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const MultiFbmPath d = sample_driver(16, 1.0, 0.8, seed);
    const double a = d.components[0].values.back();
    const double b = d.components[1].values.back();
    const double c = d.components[2].values.back();
    p01.push_back(a * b);
    p02.push_back(a * c);
    p12.push_back(b * c);
  }
  for (const auto* products : {&p01, &p02, &p12}) {
    const Moments m = mean_and_se(*products);
    CHECK(std::abs(m.mean) < 3.0 * m.se);
  }
}

TEST_CASE("self-similarity: log variance grows with slope 2H") {
  constexpr std::size_t n = 64;
  constexpr std::size_t paths = 100000;
  for (double h : {0.3, 0.75}) {
    FbmSampler sampler(n, h, Generator::wood_chan);
    std::vector<double> sum2(7, 0.0);
    for (std::uint64_t seed = 0; seed < paths; ++seed) {
      const FbmPath p = sampler.sample(1.0, seed);
      for (std::size_t j = 0; j < 7; ++j) {
        const double x = p.values[std::size_t{1} << j];
        sum2[j] += x * x;
      }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < 7; ++j) {
      const double x = std::log(static_cast<double>(std::size_t{1} << j) / n);
      const double y = std::log(sum2[j] / paths);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (7 * sxy - sx * sy) / (7 * sxx - sx * sx);
    CHECK(std::abs(slope - 2 * h) < 0.05);
  }
}

TEST_CASE("rough paths: Wood-Chan covariance at H = 0.3") {
  constexpr std::size_t paths = 20000;
  const double h = 0.3;
  FbmSampler sampler(32, h, Generator::wood_chan);
  const std::pair<std::size_t, std::size_t> probes[] = {{1, 1}, {3, 17}, {16, 32}, {31, 32}};
  std::vector<std::vector<double>> products(std::size(probes));
  for (std::uint64_t seed = 0; seed < paths; ++seed) {
    const FbmPath p = sampler.sample(1.0, seed);
    for (std::size_t k = 0; k < std::size(probes); ++k) {
      products[k].push_back(p.values[probes[k].first] * p.values[probes[k].second]);
    }
  }
  for (std::size_t k = 0; k < std::size(probes); ++k) {
    const Moments m = mean_and_se(products[k]);
    const double exact =
        fbm_covariance(probes[k].first / 32.0, probes[k].second / 32.0, h);
    CHECK(std::abs(m.mean - exact) < 3.0 * m.se);
  }
}

TEST_CASE("Cholesky factor reproduces the Toeplitz covariance") {
  constexpr std::size_t n = 24;
  const double h = 0.65;
  const ToeplitzCholesky chol(n, [h](std::size_t k) { return fgn_autocovariance(k, h); });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k <= j; ++k) sum += chol.factor(i, k) * chol.factor(j, k);
      CHECK(sum == doctest::Approx(fgn_autocovariance(i - j, h)).epsilon(1e-12));
    }
  }
}

TEST_CASE("non positive definite covariances are reported") {
  // gamma(0) = 1, gamma(1) = 0.9, gamma(2) = -0.9: the leading 3x3 block
  // has determinant 1 - 3 * 0.81 - 2 * 0.729 < 0, so the third pivot fails.
  auto bad = [](std::size_t k) { return k == 0 ? 1.0 : (k == 1 ? 0.9 : (k == 2 ? -0.9 : 0.0)); };
  try {
    ToeplitzCholesky chol(8, bad);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.index() == 2);
  }
  // A sequence that is not a covariance cannot be embedded at any size.
  auto negative = [](std::size_t k) { return k == 0 ? 1.0 : (k == 1 ? -0.9 : 0.0); };
  try {
    CirculantEmbedding emb(16, negative);
    FAIL("expected EmbeddingError");
  } catch (const EmbeddingError& e) {
    CHECK(e.most_negative_eigenvalue() < 0.0);
    CHECK(e.embedding_size() >= 32);
  }
}

TEST_CASE("embedding size is twice the next power of two") {
  const double h = 0.75;
  auto autocov = [h](std::size_t k) { return fgn_autocovariance(k, h); };
  CHECK(CirculantEmbedding(100, autocov).embedding_size() == 256);
  CHECK(CirculantEmbedding(128, autocov).embedding_size() == 256);
  CHECK(CirculantEmbedding(1, autocov).embedding_size() == 2);
  CHECK(CirculantEmbedding(100, autocov).size() == 100);
}

TEST_CASE("generators agree in distribution on the increment variance") {
  // Both are exact; compare lag-0 and lag-1 empirical moments of unit-step noise.
  const double h = 0.85;
  for (Generator g : {Generator::wood_chan, Generator::cholesky}) {
    FbmSampler sampler(8, h, g);
    std::vector<double> noise(8), v0, v1;
    for (std::uint64_t seed = 0; seed < 20000; ++seed) {
      sampler.sample_noise(seed, noise);
      v0.push_back(noise[4] * noise[4]);
      v1.push_back(noise[4] * noise[5]);
    }
    const Moments m0 = mean_and_se(v0), m1 = mean_and_se(v1);
    CHECK(std::abs(m0.mean - 1.0) < 3.0 * m0.se);
    CHECK(std::abs(m1.mean - fgn_autocovariance(1, h)) < 3.0 * m1.se);
  }
}
