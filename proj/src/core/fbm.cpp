#include "fshh/fbm.hpp"

#include <fftw3.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <string>

#include "fshh/error.hpp"

namespace fshh {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer allocate_fft(std::size_t n) {
  auto* p = fftw_alloc_complex(n);
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

void validate_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    std::ostringstream os;
    os << "Hurst parameter must lie in ]0,1[, got " << hurst;
    throw InvalidArgument(os.str());
  }
}

void validate_grid(std::size_t steps, double horizon) {
  if (steps < 1) throw InvalidArgument("fBm grid needs at least one step");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("fBm horizon must be positive and finite");
  }
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::string_view to_string(Generator g) noexcept {
  return g == Generator::cholesky ? "cholesky" : "wood_chan";
}

Generator parse_generator(std::string_view name) {
  if (name == "wood_chan") return Generator::wood_chan;
  if (name == "cholesky") return Generator::cholesky;
  throw InvalidArgument("unknown generator '" + std::string(name) +
                        "' (expected wood_chan or cholesky)");
}

double fbm_covariance(double s, double t, double hurst) {
  validate_hurst(hurst);
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(std::abs(s), two_h) + std::pow(std::abs(t), two_h) -
                std::pow(std::abs(t - s), two_h));
}

double fgn_autocovariance(std::size_t lag, double hurst) {
  const double k = static_cast<double>(lag);
  const double two_h = 2.0 * hurst;
  if (lag == 0) return 1.0;
  return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) +
                std::pow(k - 1.0, two_h));
}

// ---------------------------------------------------------------------------
// Circulant embedding

struct CirculantEmbedding::Impl {
  std::size_t n = 0;
  std::size_t length = 0;         // 2M
  std::vector<double> amplitude;  // sqrt(lambda_k / 2M)
  FftwBuffer buffer;
  fftw_plan plan = nullptr;

  ~Impl() {
    if (plan != nullptr) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

CirculantEmbedding::CirculantEmbedding(std::size_t n, const Autocovariance& autocov)
    : impl_(std::make_unique<Impl>()) {
  if (n < 1) throw InvalidArgument("circulant embedding needs n >= 1");
  impl_->n = n;

  const std::size_t max_half = 64 * n;
  std::size_t half = next_power_of_two(n);
  std::vector<double> eigen;
  double most_negative = 0.0;
  std::size_t tried = 0;

  for (;; half *= 2) {
    const std::size_t length = 2 * half;
    tried = length;
    FftwBuffer row = allocate_fft(length);
    fftw_plan plan;
    {
      std::lock_guard lock(fftw_planner_mutex());
      plan = fftw_plan_dft_1d(static_cast<int>(length), row.get(), row.get(),
                              FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (std::size_t j = 0; j <= half; ++j) {
      row[j][0] = autocov(j);
      row[j][1] = 0.0;
    }
    for (std::size_t j = 1; j < half; ++j) {
      row[length - j][0] = row[j][0];
      row[length - j][1] = 0.0;
    }
    fftw_execute(plan);
    {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }

    eigen.assign(length, 0.0);
    double max_eigen = 0.0;
    most_negative = 0.0;
    for (std::size_t k = 0; k < length; ++k) {
      eigen[k] = row[k][0];
      max_eigen = std::max(max_eigen, eigen[k]);
      most_negative = std::min(most_negative, eigen[k]);
    }
    if (most_negative >= -1e-9 * max_eigen) break;
    if (half * 2 > max_half) {
      std::ostringstream os;
      os << "circulant embedding is not non-negative definite: most negative "
            "eigenvalue "
         << most_negative << " at embedding size " << length;
      throw EmbeddingError(os.str(), most_negative, length);
    }
  }

  impl_->length = tried;
  impl_->amplitude.resize(tried);
  const double scale = 1.0 / static_cast<double>(tried);
  for (std::size_t k = 0; k < tried; ++k) {
    impl_->amplitude[k] = std::sqrt(std::max(eigen[k], 0.0) * scale);
  }
  impl_->buffer = allocate_fft(tried);
  std::lock_guard lock(fftw_planner_mutex());
  impl_->plan = fftw_plan_dft_1d(static_cast<int>(tried), impl_->buffer.get(),
                                 impl_->buffer.get(), FFTW_FORWARD, FFTW_ESTIMATE);
}

CirculantEmbedding::~CirculantEmbedding() = default;
CirculantEmbedding::CirculantEmbedding(CirculantEmbedding&&) noexcept = default;
CirculantEmbedding& CirculantEmbedding::operator=(CirculantEmbedding&&) noexcept = default;

std::size_t CirculantEmbedding::size() const noexcept { return impl_->n; }
std::size_t CirculantEmbedding::embedding_size() const noexcept { return impl_->length; }

void CirculantEmbedding::sample(NormalStream& normals, std::span<double> out) {
  if (out.size() != impl_->n) throw InvalidArgument("output span has wrong length");
  auto& buf = impl_->buffer;
  for (std::size_t k = 0; k < impl_->length; ++k) {
    const double a = impl_->amplitude[k];
    buf[k][0] = a * normals.next();
    buf[k][1] = a * normals.next();
  }
  fftw_execute(impl_->plan);
  // Real and imaginary parts are independent draws with the target
  // covariance; the real part is kept.
  for (std::size_t j = 0; j < impl_->n; ++j) out[j] = buf[j][0];
}

// ---------------------------------------------------------------------------
// Cholesky reference

ToeplitzCholesky::ToeplitzCholesky(std::size_t n,
                                   const std::function<double(std::size_t)>& autocov)
    : n_(n), lower_(n * n, 0.0) {
  if (n < 1) throw InvalidArgument("Cholesky factor needs n >= 1");
  std::vector<double> gamma(n);
  for (std::size_t k = 0; k < n; ++k) gamma[k] = autocov(k);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) lower_[j * n + i] = gamma[i - j];
  }
  const lapack_int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(n),
                                         lower_.data(), static_cast<lapack_int>(n));
  if (info > 0) {
    const auto pivot = static_cast<std::size_t>(info - 1);
    std::ostringstream os;
    os << "covariance is not positive definite: non-positive pivot at index " << pivot;
    throw NumericalError(os.str(), pivot);
  }
  if (info < 0) throw NumericalError("dpotrf rejected its arguments");
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) lower_[j * n + i] = 0.0;
  }
}

void ToeplitzCholesky::sample(NormalStream& normals, std::span<double> out) const {
  if (out.size() != n_) throw InvalidArgument("output span has wrong length");
  std::vector<double> z(n_);
  normals.fill(z);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    const double zj = z[j];
    const double* col = lower_.data() + j * n_;
    for (std::size_t i = j; i < n_; ++i) out[i] += col[i] * zj;
  }
}

// ---------------------------------------------------------------------------
// Path sampler

FbmSampler::FbmSampler(std::size_t steps, double hurst, Generator generator)
    : steps_(steps), hurst_(hurst), generator_(generator) {
  validate_hurst(hurst);
  if (steps < 1) throw InvalidArgument("fBm grid needs at least one step");
  auto autocov = [hurst](std::size_t k) { return fgn_autocovariance(k, hurst); };
  if (generator == Generator::wood_chan) {
    embedding_ = std::make_unique<CirculantEmbedding>(steps, autocov);
  } else {
    cholesky_ = std::make_unique<ToeplitzCholesky>(steps, autocov);
  }
}

FbmSampler::~FbmSampler() = default;
FbmSampler::FbmSampler(FbmSampler&&) noexcept = default;
FbmSampler& FbmSampler::operator=(FbmSampler&&) noexcept = default;

void FbmSampler::sample_noise(std::uint64_t seed, std::span<double> out) {
  NormalStream normals(seed);
  if (embedding_) {
    embedding_->sample(normals, out);
  } else {
    cholesky_->sample(normals, out);
  }
}

FbmPath FbmSampler::sample(double horizon, std::uint64_t seed) {
  validate_grid(steps_, horizon);
  FbmPath path;
  path.hurst = hurst_;
  path.horizon = horizon;
  path.seed = seed;
  path.generator = generator_;
  path.values.assign(steps_ + 1, 0.0);

  std::vector<double> noise(steps_);
  sample_noise(seed, noise);
  const double scale = std::pow(horizon / static_cast<double>(steps_), hurst_);
  double acc = 0.0;
  for (std::size_t k = 0; k < steps_; ++k) {
    acc += scale * noise[k];
    path.values[k + 1] = acc;
  }
  return path;
}

FbmPath sample_cholesky(std::size_t steps, double horizon, double hurst, std::uint64_t seed) {
  validate_grid(steps, horizon);
  return FbmSampler(steps, hurst, Generator::cholesky).sample(horizon, seed);
}

FbmPath sample_wood_chan(std::size_t steps, double horizon, double hurst, std::uint64_t seed) {
  validate_grid(steps, horizon);
  return FbmSampler(steps, hurst, Generator::wood_chan).sample(horizon, seed);
}

MultiFbmPath sample_driver(std::size_t steps, double horizon, double hurst,
                           std::uint64_t master_seed, Generator generator) {
  validate_grid(steps, horizon);
  FbmSampler sampler(steps, hurst, generator);
  MultiFbmPath driver;
  driver.master_seed = master_seed;
  for (std::size_t k = 0; k < 3; ++k) {
    driver.components[k] = sampler.sample(horizon, derive_seed(master_seed, k));
  }
  return driver;
}

}  // namespace fshh
