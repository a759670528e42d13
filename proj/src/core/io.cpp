#include "fshh/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "fshh/error.hpp"

namespace fshh {

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("failed to format number");
  return std::string(buf, ptr);
}

std::string format_csv_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_text_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("failed writing '" + path + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

std::string trajectory_csv(const SimulationResult& result) {
  std::string out = "t,V,m,h,n\n";
  out.reserve(result.trajectory.size() * 100);
  for (std::size_t k = 0; k < result.trajectory.size(); ++k) {
    const State& x = result.trajectory[k];
    out += format_csv_real(result.grid[k]);
    for (double value : {x.v, x.m, x.h, x.n}) {
      out += ',';
      out += format_csv_real(value);
    }
    out += '\n';
  }
  return out;
}

std::string clamp_csv(const SimulationResult& result) {
  std::string out = "step,coord,pre_value\n";
  for (const ClampEvent& e : result.clamp_events) {
    out += std::to_string(e.step);
    out += ',';
    out += "mhn"[e.coord];
    out += ',';
    out += format_csv_real(e.pre_value);
    out += '\n';
  }
  return out;
}

std::string driver_csv(const MultiFbmPath& driver) {
  std::string out = "t,B1,B2,B3\n";
  for (std::size_t i = 0; i <= driver.steps(); ++i) {
    out += format_csv_real(driver.time(i));
    for (const FbmPath& c : driver.components) {
      out += ',';
      out += format_csv_real(c.values[i]);
    }
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const SweepTable& table) {
  std::string out = "I,spike_count\n";
  for (const SweepRow& row : table.rows) {
    out += format_csv_real(row.current);
    out += ',';
    out += std::to_string(row.spike_count);
    out += '\n';
  }
  return out;
}

std::string series_csv(const RecordingSeries& series) {
  std::string out = "k,H,exponent,fit_residual\n";
  for (std::size_t k = 0; k < series.recordings.size(); ++k) {
    const Recording& rec = series.recordings[k];
    out += std::to_string(k + 1);
    out += ',';
    out += format_csv_real(rec.hurst);
    out += ',';
    out += format_csv_real(rec.median_exponent);
    out += ',';
    out += format_csv_real(rec.median_residual);
    out += '\n';
  }
  return out;
}

std::string voltage_svg(const SimulationResult& result) {
  constexpr double width = 800.0, height = 300.0, margin = 20.0;
  double v_min = 0.0, v_max = 1.0;
  if (!result.trajectory.empty()) {
    const auto [lo, hi] = std::minmax_element(
        result.trajectory.begin(), result.trajectory.end(),
        [](const State& a, const State& b) { return a.v < b.v; });
    v_min = lo->v;
    v_max = hi->v;
  }
  if (v_max - v_min < 1e-12) {
    v_min -= 1.0;
    v_max += 1.0;
  }
  const double t_end = result.grid.empty() ? 1.0 : std::max(result.grid.back(), 1e-12);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"300\" "
         "viewBox=\"0 0 800 300\">\n";
  out += "<rect width=\"800\" height=\"300\" fill=\"white\"/>\n";
  out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  char buf[64];
  for (std::size_t k = 0; k < result.trajectory.size(); ++k) {
    const double x = margin + (width - 2 * margin) * result.grid[k] / t_end;
    const double y =
        height - margin - (height - 2 * margin) * (result.trajectory[k].v - v_min) / (v_max - v_min);
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x, y);
    out += buf;
  }
  out += "\"/>\n</svg>\n";
  return out;
}

void write_trajectory_csv(const std::string& path, const SimulationResult& result) {
  write_text_file(path, trajectory_csv(result));
}
void write_clamp_csv(const std::string& path, const SimulationResult& result) {
  write_text_file(path, clamp_csv(result));
}
void write_driver_csv(const std::string& path, const MultiFbmPath& driver) {
  write_text_file(path, driver_csv(driver));
}
void write_sweep_csv(const std::string& path, const SweepTable& table) {
  write_text_file(path, sweep_csv(table));
}
void write_series_csv(const std::string& path, const RecordingSeries& series) {
  write_text_file(path, series_csv(series));
}
void write_voltage_svg(const std::string& path, const SimulationResult& result) {
  write_text_file(path, voltage_svg(result));
}

}  // namespace fshh
