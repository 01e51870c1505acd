#include "wrilab/config.hpp"
#include "wrilab/analysis.hpp"
#include "wrilab/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace wrilab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v))
    throw ConfigError("key '" + key + "': '" + t + "' is not a finite number");
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("key '" + key + "': '" + t + "' is not a non-negative integer");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "': list must not be empty");
  return out;
}

std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format(v[i]);
  return s;
}

} // namespace

void RunConfig::validate() const {
  geo.validate();
  if (!(c_star >= geo.c_min && c_star <= geo.c_max)) throw ConfigError("c_min <= c_star <= c_max");
  if (lambdas.empty()) throw ConfigError("lambda list must not be empty");
  const double lambda0 = lambda_admissible_max(geo);
  for (double l : lambdas) {
    if (!(l > 0.0)) throw ConfigError("lambda > 0");
    if (!(l < lambda0)) throw ConfigError("lambda < lambda_0 = T - |z_s - z_r| / c_min");
  }
  if (alphas.empty()) throw ConfigError("alpha list must not be empty");
  for (double a : alphas)
    if (!(a > 0.0)) throw ConfigError("alpha > 0");
  if (wavelet == WaveletKind::tabulated) throw ConfigError("wavelet must be bump or bump_derivative");
  if (!(dz > 0.0)) throw ConfigError("dz > 0");
  if (!(dt >= 0.0)) throw ConfigError("dt > 0 (or auto)");
  if (scan_points < 2) throw ConfigError("scan_points >= 2");
  if (!(eps > 0.0 && eps < mollifier_eps_limit(geo)))
    throw ConfigError("0 < eps < min(|z_r - z_s|, z_s - z_min, z_max - z_s)");
  if (basin_starts < 2) throw ConfigError("basin_starts >= 2");
  if (outdir.empty()) throw ConfigError("outdir must not be empty");
}

double RunConfig::dt_for(double lambda) const { return dt > 0.0 ? dt : lambda / 40.0; }

RunConfig preset(const std::string& name) {
  if (name == "cfg0") return RunConfig{};
  throw ConfigError("unknown preset '" + name + "'");
}

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  RunConfig cfg = base;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");

    if (key == "z_min") cfg.geo.z_min = parse_number(key, value);
    else if (key == "z_max") cfg.geo.z_max = parse_number(key, value);
    else if (key == "z_s") cfg.geo.z_s = parse_number(key, value);
    else if (key == "z_r") cfg.geo.z_r = parse_number(key, value);
    else if (key == "T") cfg.geo.T = parse_number(key, value);
    else if (key == "rho") cfg.geo.rho = parse_number(key, value);
    else if (key == "c_min") cfg.geo.c_min = parse_number(key, value);
    else if (key == "c_max") cfg.geo.c_max = parse_number(key, value);
    else if (key == "c_star") cfg.c_star = parse_number(key, value);
    else if (key == "lambda") cfg.lambdas = parse_list(key, value);
    else if (key == "alpha") cfg.alphas = parse_list(key, value);
    else if (key == "wavelet") cfg.wavelet = wavelet_kind_from_string(value);
    else if (key == "dz") cfg.dz = parse_number(key, value);
    else if (key == "dt") cfg.dt = value == "auto" ? 0.0 : parse_number(key, value);
    else if (key == "scan_points") cfg.scan_points = parse_count(key, value);
    else if (key == "eps") cfg.eps = parse_number(key, value);
    else if (key == "seed") cfg.seed = parse_count(key, value);
    else if (key == "outdir") cfg.outdir = value;
    else if (key == "basin_starts") cfg.basin_starts = parse_count(key, value);
    else throw ConfigError("unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), base);
}

std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  const Geometry& g = cfg.geo;
  out << "z_min = " << format(g.z_min) << "\n"
      << "z_max = " << format(g.z_max) << "\n"
      << "z_s = " << format(g.z_s) << "\n"
      << "z_r = " << format(g.z_r) << "\n"
      << "T = " << format(g.T) << "\n"
      << "rho = " << format(g.rho) << "\n"
      << "c_min = " << format(g.c_min) << "\n"
      << "c_max = " << format(g.c_max) << "\n"
      << "c_star = " << format(cfg.c_star) << "\n"
      << "lambda = " << format_list(cfg.lambdas) << "\n"
      << "alpha = " << format_list(cfg.alphas) << "\n"
      << "wavelet = " << to_string(cfg.wavelet) << "\n"
      << "dz = " << format(cfg.dz) << "\n"
      << "dt = " << (cfg.dt > 0.0 ? format(cfg.dt) : std::string("auto")) << "\n"
      << "scan_points = " << cfg.scan_points << "\n"
      << "eps = " << format(cfg.eps) << "\n"
      << "seed = " << cfg.seed << "\n"
      << "outdir = " << cfg.outdir << "\n"
      << "basin_starts = " << cfg.basin_starts << "\n";
  return out.str();
}

} // namespace wrilab
