#pragma once

// CSV and SVG writers. Every writer goes through a temporary file that is
// renamed into place, so a failed write leaves no partial output.
// Numbers are written with 17 significant digits.

#include <string>

#include "fshh/analysis.hpp"
#include "fshh/fbm.hpp"
#include "fshh/solver.hpp"

namespace fshh {

// Shortest representation that parses back to the same double.
std::string format_real(double value);
// printf("%.17g").
std::string format_csv_real(double value);

void write_text_file(const std::string& path, const std::string& contents);

// t,V,m,h,n
void write_trajectory_csv(const std::string& path, const SimulationResult& result);
// step,coord,pre_value  (coord is m, h or n)
void write_clamp_csv(const std::string& path, const SimulationResult& result);
// t,B1,B2,B3
void write_driver_csv(const std::string& path, const MultiFbmPath& driver);
// I,spike_count
void write_sweep_csv(const std::string& path, const SweepTable& table);
// k,H,exponent,fit_residual  (k from 1; exponent and residual are ensemble medians)
void write_series_csv(const std::string& path, const RecordingSeries& series);
// Polyline of V against t.
void write_voltage_svg(const std::string& path, const SimulationResult& result);

std::string trajectory_csv(const SimulationResult& result);
std::string driver_csv(const MultiFbmPath& driver);
std::string sweep_csv(const SweepTable& table);
std::string series_csv(const RecordingSeries& series);
std::string clamp_csv(const SimulationResult& result);
std::string voltage_svg(const SimulationResult& result);

}  // namespace fshh
