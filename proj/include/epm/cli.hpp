#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "epm/interferometry.hpp"
#include "epm/jsa.hpp"

namespace epm::cli {

// Parsed, validated, fully-defaulted run configuration.  Mirrors the
// sectioned key = value config file; see docs in README.md.
struct RunConfig {
  // [crystal]
  std::string preset_name;  // empty when inline coefficients are given
  CrystalConfig crystal;    // unit-converted, grating not yet applied
  bool solve_grating = true;          // grating = solve
  std::optional<double> grating_um;   // grating = <value>; nullopt+!solve = unpoled

  // [pump]
  PumpSpectrum pump;

  // [grid]
  int grid_n = 512;
  std::optional<double> grid_span;  // rad/ps; nullopt = auto

  // [scan]
  ScanMode scan_mode = ScanMode::hom;
  StateKind scan_state = StateKind::db_l;  // tb | db | db_l (grid)
  double tau_min = -6.0;
  double tau_max = 6.0;
  int scan_points = 1201;

  // [output]
  std::filesystem::path out_dir = ".";
  std::string format = "csv";  // data file format: csv | json
};

RunConfig load_config(const std::filesystem::path& path);

// Serialize back to the config-file syntax; load_config(save) == original.
std::string serialize(const RunConfig& cfg);

// Subcommands: design, jsa, hom, mz, schmidt, timedomain.
// Returns the process exit code: 0 ok, 1 config/io error, 2 physics
// contract violation.  Always writes <out_dir>/<subcommand>_report.json
// when the run gets far enough to produce one.
int run(const RunConfig& cfg, const std::string& subcommand);

// Unit-suffix aware number parsing ("790 nm", "170 fs", "3 THz", "2 cm").
// `native` names the unit a bare number is taken in: "um", "ps", "radps".
double parse_quantity(const std::string& text, const std::string& native);

// Fixed float formatting used in all data files: 9 significant digits,
// scientific notation.
std::string format_float(double x);

}  // namespace epm::cli
