#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fsoqkd/planner.hpp"
#include "fsoqkd/qkd.hpp"

namespace fsoqkd {

/// Everything a CLI run needs. Defaults are the reference setup:
/// lambda = 1.55 um, R = 10 cm, matched square side, 20 log-spaced path
/// lengths over 1-100 km, cn2 in {1e-15, 1e-14, 1e-13}, both mode sets.
struct RunConfig {
  planner::ScanGeometry geometry;
  std::vector<double> lengths;
  bool lengths_given = false; ///< lengths came from the config file
  std::vector<double> cn2;
  qkd::QkdSystemParams qkd;
  planner::EnvelopeOptions envelope;
  std::vector<planner::ModeSet> mode_sets{planner::ModeSet::LG, planner::ModeSet::FB};
  std::string output; ///< empty means stdout

  RunConfig();
  /// Every (L, cn2) pair, L-major.
  std::vector<std::pair<double, double>> points() const;
  /// Same, but when no lengths were configured the grid is L in {10, 30, 100} km:
  /// the far-field range where the 5/3 vs square-law ordering is expected.
  std::vector<std::pair<double, double>> validation_points() const;
};

/// n values spaced evenly in log between lo and hi inclusive.
std::vector<double> log_space(double lo, double hi, int count);

/// Parses "<number>[unit]" where unit is one of m, km, cm, mm, um, µm, nm.
/// A bare number is taken in meters. Throws InvalidArgument.
double parse_length(const std::string& text);

/// Error raised for malformed configuration; message carries "line N".
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// YAML document with optional sections channel, turbulence, qkd, planner,
/// output. Unknown keys are rejected. An empty document yields defaults.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace fsoqkd
