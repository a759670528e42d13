#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fshh {

// Base class for every error raised by the library. The C API maps each
// subclass onto one fshh_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Numerical failure: non-positive pivot, divergence, undefined estimate.
// `index` is the pivot or step index when one applies.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, std::size_t index = npos)
      : Error(what), index_(index) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Circulant embedding could not be made non-negative definite.
class EmbeddingError : public Error {
 public:
  EmbeddingError(const std::string& what, double most_negative_eigenvalue,
                 std::size_t embedding_size)
      : Error(what),
        most_negative_(most_negative_eigenvalue),
        embedding_size_(embedding_size) {}

  double most_negative_eigenvalue() const noexcept { return most_negative_; }
  std::size_t embedding_size() const noexcept { return embedding_size_; }

 private:
  double most_negative_;
  std::size_t embedding_size_;
};

// A gate left [0,1] under the error_on_exit clamp policy.
class ViabilityBreach : public Error {
 public:
  ViabilityBreach(const std::string& what, std::size_t step, int coord, double value)
      : Error(what), step_(step), coord_(coord), value_(value) {}

  std::size_t step() const noexcept { return step_; }
  int coord() const noexcept { return coord_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t step_;
  int coord_;
  double value_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Bad or missing configuration key.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace fshh
