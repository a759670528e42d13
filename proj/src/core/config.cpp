#include "fshh/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fshh/error.hpp"
#include "fshh/io.hpp"

namespace fshh {

namespace {

enum class Kind { real, integer, flag, text };

struct KeySpec {
  const char* name;
  Kind kind;
  const char* default_value;  // nullptr: no default
};

// Serialization order.
constexpr KeySpec kKeys[] = {
    {"C", Kind::real, "1"},
    {"I", Kind::real, "10"},
    {"E_Na", Kind::real, "115"},
    {"E_K", Kind::real, "-12"},
    {"E_L", Kind::real, "10.6"},
    {"gbar_Na", Kind::real, "120"},
    {"gbar_K", Kind::real, "36"},
    {"gbar_L", Kind::real, "0.3"},
    {"sigma_1", Kind::real, "0"},
    {"sigma_2", Kind::real, "0"},
    {"sigma_3", Kind::real, "0"},
    {"V0", Kind::real, "0"},
    {"T", Kind::real, "50"},
    {"dt", Kind::real, "0.01"},
    {"hurst", Kind::real, "0.75"},
    {"seed", Kind::integer, "0"},
    {"clamp_policy", Kind::text, "clamp_and_log"},
    {"generator", Kind::text, "wood_chan"},
    {"threshold", Kind::real, "50"},
    {"refractory", Kind::real, "2"},
    {"window", Kind::real, "50"},
    {"ensemble", Kind::integer, "20"},
    {"coordinate", Kind::text, "n"},
    {"max_log2_lag", Kind::integer, "4"},
    {"sweep_start", Kind::real, "0"},
    {"sweep_stop", Kind::real, "12"},
    {"sweep_step", Kind::real, "0.5"},
    {"fbm_steps", Kind::integer, "1024"},
    {"sigma_row4", Kind::real, "0"},
    {"sigma_boundary_offset", Kind::real, "0"},
    {"svg", Kind::flag, "false"},
    {"out", Kind::text, nullptr},
};

const KeySpec* find_spec(std::string_view key) {
  for (const KeySpec& spec : kKeys) {
    if (key == spec.name) return &spec;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

RunConfig::Value parse_value(const KeySpec& spec, std::string_view raw) {
  const std::string_view text = trim(raw);
  auto bad = [&](const char* expected) {
    return UsageError("invalid value '" + std::string(text) + "' for key '" + spec.name +
                      "' (expected " + expected + ")");
  };
  switch (spec.kind) {
    case Kind::real: {
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw bad("a finite real number");
      }
      return value;
    }
    case Kind::integer: {
      std::uint64_t value = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw bad("a non-negative integer");
      }
      return value;
    }
    case Kind::flag:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw bad("true or false");
    case Kind::text:
      if (text.empty()) throw bad("a non-empty string");
      return std::string(text);
  }
  throw bad("a value");
}

std::string format_value(const RunConfig::Value& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_real(v);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return v;
        }
      },
      value);
}

}  // namespace

RunConfig::RunConfig() {
  for (const KeySpec& spec : kKeys) {
    if (spec.default_value != nullptr) {
      values_.emplace(spec.name, parse_value(spec, spec.default_value));
    }
  }
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const KeySpec& spec : kKeys) out.emplace_back(spec.name);
    return out;
  }();
  return names;
}

bool RunConfig::is_known(std::string_view key) {
  return key == "sigma" || find_spec(key) != nullptr;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  if (key == "sigma") {
    for (const char* k : {"sigma_1", "sigma_2", "sigma_3"}) set(k, value);
    return;
  }
  const KeySpec* spec = find_spec(key);
  if (spec == nullptr) throw UsageError("unknown configuration key '" + std::string(key) + "'");
  values_.insert_or_assign(std::string(key), parse_value(*spec, value));
}

bool RunConfig::has(std::string_view key) const { return values_.find(key) != values_.end(); }

const RunConfig::Value& RunConfig::lookup(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    if (find_spec(key) == nullptr) {
      throw UsageError("unknown configuration key '" + std::string(key) + "'");
    }
    throw UsageError("missing required key '" + std::string(key) + "'");
  }
  return it->second;
}

std::string RunConfig::get_text(std::string_view key) const { return format_value(lookup(key)); }

double RunConfig::real(std::string_view key) const { return std::get<double>(lookup(key)); }
std::uint64_t RunConfig::integer(std::string_view key) const {
  return std::get<std::uint64_t>(lookup(key));
}
bool RunConfig::flag(std::string_view key) const { return std::get<bool>(lookup(key)); }
std::string RunConfig::text(std::string_view key) const {
  return std::get<std::string>(lookup(key));
}
std::string RunConfig::require_text(std::string_view key) const { return text(key); }

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return config;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const KeySpec& spec : kKeys) {
    const auto it = values_.find(std::string_view(spec.name));
    if (it == values_.end()) continue;
    out += spec.name;
    out += " = ";
    out += format_value(it->second);
    out += '\n';
  }
  return out;
}

void RunConfig::save(const std::string& path) const { write_text_file(path, serialize()); }

HHParams RunConfig::params() const {
  HHParams p;
  p.capacitance = real("C");
  p.current = real("I");
  p.e_na = real("E_Na");
  p.e_k = real("E_K");
  p.e_l = real("E_L");
  p.gbar_na = real("gbar_Na");
  p.gbar_k = real("gbar_K");
  p.gbar_l = real("gbar_L");
  p.sigma = {real("sigma_1"), real("sigma_2"), real("sigma_3")};
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return p;
}

SolverConfig RunConfig::solver() const {
  SolverConfig c;
  c.horizon = real("T");
  c.dt = real("dt");
  c.hurst = real("hurst");
  c.seed = integer("seed");
  try {
    c.clamp_policy = parse_clamp_policy(text("clamp_policy"));
    c.generator = parse_generator(text("generator"));
    (void)c.steps();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return c;
}

SpikeOptions RunConfig::spikes() const {
  SpikeOptions s;
  s.threshold = real("threshold");
  s.refractory = real("refractory");
  if (s.refractory < 0.0) throw UsageError("invalid value for key 'refractory' (must be >= 0)");
  return s;
}

SeriesOptions RunConfig::series() const {
  SeriesOptions s;
  s.ensemble = static_cast<std::size_t>(integer("ensemble"));
  if (s.ensemble < 1) throw UsageError("invalid value for key 'ensemble' (must be >= 1)");
  s.holder.max_log2_lag = static_cast<std::size_t>(integer("max_log2_lag"));
  s.v0 = real("V0");
  try {
    s.coordinate = parse_coordinate(text("coordinate"));
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return s;
}

std::vector<double> RunConfig::sweep_currents() const {
  try {
    return current_range(real("sweep_start"), real("sweep_stop"), real("sweep_step"));
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace fshh
