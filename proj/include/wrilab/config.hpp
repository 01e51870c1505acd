#pragma once

// Run configuration: flat `key = value` text with comma-separated lists,
// plus the built-in reference preset.

#include "wrilab/acoustics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wrilab {

struct RunConfig {
  Geometry geo;
  double c_star = 1.0;
  std::vector<double> lambdas{0.02, 0.04, 0.01};
  std::vector<double> alphas{0.25, 0.5, 0.6};
  WaveletKind wavelet = WaveletKind::bump;
  double dz = 1.0 / 400.0;
  double dt = 0.0;  // 0: lambda / 40 for each lambda
  std::size_t scan_points = 2001;
  double eps = 0.2;
  std::uint64_t seed = 20240917;
  std::string outdir = "out";
  std::size_t basin_starts = 101;

  // Throws ConfigError naming the first violated invariant.
  void validate() const;

  // Data time step used for a given lambda.
  double dt_for(double lambda) const;
  // First lambda in the list: the one used by single-lambda commands.
  double primary_lambda() const { return lambdas.front(); }
};

RunConfig preset(const std::string& name);  // "cfg0"

// Parses `key = value` lines.  '#' and ';' start comments; blank lines are
// ignored.  Unknown keys, malformed numbers and duplicate keys throw
// ConfigError.  Keys not present keep the values of `base`.
RunConfig parse_config(const std::string& text, const RunConfig& base = preset("cfg0"));
RunConfig load_config(const std::string& path, const RunConfig& base = preset("cfg0"));

// Serializes to the same format (round-trips through parse_config).
std::string to_config_text(const RunConfig& cfg);

} // namespace wrilab
