#pragma once

// Flat key/value run configuration.
//
//   # comment
//   I = 10
//   sigma_1 = 0.25
//
// Every key has a type and a default except `out`, which has no default.
// Unknown keys and unparseable values raise UsageError naming the key.
// serialize() writes every set key in a fixed order with round-trip exact
// numbers, so parse(serialize(c)) == c.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fshh/analysis.hpp"
#include "fshh/gating_kinetics.hpp"
#include "fshh/solver.hpp"

namespace fshh {

class RunConfig {
 public:
  using Value = std::variant<double, std::uint64_t, bool, std::string>;

  RunConfig();

  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path);
  std::string serialize() const;
  void save(const std::string& path) const;

  // `sigma` is accepted as shorthand for sigma_1 = sigma_2 = sigma_3.
  void set(std::string_view key, std::string_view value);
  bool has(std::string_view key) const;
  std::string get_text(std::string_view key) const;

  double real(std::string_view key) const;
  std::uint64_t integer(std::string_view key) const;
  bool flag(std::string_view key) const;
  std::string text(std::string_view key) const;
  // UsageError("missing required key 'key'") when unset.
  std::string require_text(std::string_view key) const;

  static const std::vector<std::string>& keys();
  static bool is_known(std::string_view key);

  HHParams params() const;
  SolverConfig solver() const;
  SpikeOptions spikes() const;
  SeriesOptions series() const;
  std::vector<double> sweep_currents() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

 private:
  const Value& lookup(std::string_view key) const;

  std::map<std::string, Value, std::less<>> values_;
};

}  // namespace fshh
