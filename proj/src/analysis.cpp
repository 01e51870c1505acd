#include "wrilab/analysis.hpp"
#include "wrilab/errors.hpp"
#include "wrilab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace wrilab {

double lambda_admissible_max(const Geometry& geo) { return geo.T - geo.offset() / geo.c_min; }

double separation_scale(const Geometry& geo) { return 2.0 * geo.c_max * geo.c_max / geo.offset(); }

SupportSeparation supports_disjoint(const Geometry& geo, Velocity c, Velocity c_star,
                                    double lambda) {
  if (!(lambda > 0.0 && lambda < lambda_admissible_max(geo)))
    throw DomainError("supports_disjoint: requires 0 < lambda < lambda_0");
  SupportSeparation s;
  s.disjoint = std::abs(transit_time(geo, c) - transit_time(geo, c_star)) > lambda;
  s.sufficient = std::abs(c.value - c_star.value) > separation_scale(geo) * lambda;
  return s;
}

Experiment ProblemSetup::make(double lambda) const {
  if (!(samples_per_lambda > 0.0)) throw ConfigError("samples_per_lambda > 0");
  return Experiment::consistent(geo, c_star, Wavelet::of_kind(wavelet, lambda),
                                lambda / samples_per_lambda);
}

// ---------------------------------------------------------------- scans

ScanSpec ScanSpec::full(const Geometry& geo, std::size_t points) {
  return ScanSpec{geo.c_min, geo.c_max, points};
}

std::vector<double> ScanSpec::values() const {
  if (points < 1) throw DomainError("ScanSpec: need at least one point");
  if (points == 1) return {c_lo};
  if (!(c_lo < c_hi)) throw DomainError("ScanSpec: need c_lo < c_hi");
  std::vector<double> c(points);
  const double step = (c_hi - c_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) c[i] = c_lo + static_cast<double>(i) * step;
  c.back() = c_hi;
  return c;
}

double ScanSpec::cell() const {
  return points > 1 ? (c_hi - c_lo) / static_cast<double>(points - 1) : 0.0;
}

namespace {

void check_scan_range(const Geometry& geo, const ScanSpec& spec) {
  if (spec.c_lo < geo.c_min || spec.c_hi > geo.c_max || (spec.points > 1 && spec.c_hi < spec.c_lo))
    throw DomainError("scan grid must lie within [c_min, c_max]");
}

std::vector<double> evaluate_all(const Experiment& exp, const Objective& obj,
                                 const std::vector<double>& cs, unsigned jobs) {
  std::vector<double> out(cs.size());
  parallel_for(cs.size(), jobs, [&](std::size_t i) { out[i] = evaluate(exp, Velocity(cs[i]), obj); });
  return out;
}

std::size_t argmin_index(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

// Far region {c : |c - c_star| > L lambda} on the scan grid.
std::vector<double> far_region(const Experiment& exp, const ScanSpec& spec) {
  const double radius = separation_scale(exp.geo) * exp.wavelet.lambda();
  std::vector<double> far;
  for (double c : spec.values())
    if (std::abs(c - exp.c_star.value) > radius) far.push_back(c);
  return far;
}

// +1: non-decreasing and strictly increasing overall; -1 likewise decreasing.
bool monotone(const std::vector<double>& v, int direction) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double step = (v[i] - v[i - 1]) * direction;
    if (!(step > 0.0)) return false;
  }
  return true;
}

double relative_variation(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  return scale > 0.0 ? (*hi - *lo) / scale : 0.0;
}

TheoremReport premise(const Experiment& exp, const ScanSpec& spec, int theorem) {
  check_scan_range(exp.geo, spec);
  TheoremReport rep;
  rep.theorem = theorem;
  rep.lambda = exp.wavelet.lambda();
  rep.L = separation_scale(exp.geo);
  rep.lambda0 = lambda_admissible_max(exp.geo);
  rep.tolerance = spec.cell();
  return rep;
}

bool within_cell(double computed, double predicted, double cell) {
  return std::abs(computed - predicted) <= cell * (1.0 + 1e-9) + 1e-12;
}

} // namespace

ScanResult scan_landscape(const Experiment& exp, const std::vector<Objective>& objectives,
                          const ScanSpec& spec, unsigned jobs) {
  check_scan_range(exp.geo, spec);
  ScanResult res;
  res.c_values = spec.values();
  res.lambda = exp.wavelet.lambda();
  const std::size_t n = res.c_values.size();
  const std::size_t k = objectives.size();
  res.columns.assign(k, std::vector<double>(n));
  for (const auto& o : objectives) res.names.push_back(o.label());
  parallel_for(n, jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < k; ++j)
      res.columns[j][i] = evaluate(exp, Velocity(res.c_values[i]), objectives[j]);
  });
  return res;
}

std::vector<std::size_t> local_minima(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  const std::size_t n = v.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] == v[i]) ++j;
    if (j + 1 < n && v[i - 1] > v[i] && v[j + 1] > v[i]) out.push_back((i + j) / 2);
    i = j + 1;
  }
  return out;
}

double beta_parameter(const Geometry& geo, Velocity c_star, double alpha) {
  return geo.length() / (c_star.value * c_star.value) - 4.0 * alpha * alpha;
}

std::string to_string(TheoremStatus s) {
  switch (s) {
    case TheoremStatus::pass: return "pass";
    case TheoremStatus::fail: return "fail";
    case TheoremStatus::not_applicable: return "not_applicable";
  }
  return "unknown";
}

TheoremReport theorem1_verify(const Experiment& exp, const ScanSpec& spec, unsigned jobs) {
  TheoremReport rep = premise(exp, spec, 1);
  rep.predicted = exp.geo.c_max;
  if (!(rep.lambda < rep.lambda0)) {
    rep.note = "lambda >= lambda_0";
    return rep;
  }
  const std::vector<double> far = far_region(exp, spec);
  rep.far_points = far.size();
  if (far.empty()) {
    rep.note = "empty far region";
    return rep;
  }
  const std::vector<double> vals = evaluate_all(exp, Objective::fwi(), far, jobs);
  rep.computed = far[argmin_index(vals)];
  rep.monotone = monotone(vals, -1);
  rep.flat_variation = relative_variation(vals);
  rep.status = within_cell(rep.computed, rep.predicted, rep.tolerance) ? TheoremStatus::pass
                                                                       : TheoremStatus::fail;
  rep.note = rep.monotone ? "far-region values strictly decreasing in c"
                          : "far-region values not strictly decreasing in c";
  return rep;
}

TheoremReport theorem2_verify(const Experiment& exp, double alpha, const ScanSpec& spec,
                              unsigned jobs) {
  TheoremReport rep = premise(exp, spec, 2);
  rep.alpha = alpha;
  rep.beta = beta_parameter(exp.geo, exp.c_star, alpha);
  const double beta_scale = exp.geo.length() / (exp.c_star.value * exp.c_star.value);
  const bool flat = std::abs(rep.beta) <= 1e-12 * beta_scale;
  rep.predicted = flat ? std::numeric_limits<double>::quiet_NaN()
                       : (rep.beta > 0.0 ? exp.geo.c_min : exp.geo.c_max);
  if (!(rep.lambda < rep.lambda0)) {
    rep.note = "lambda >= lambda_0";
    return rep;
  }
  const std::vector<double> far = far_region(exp, spec);
  rep.far_points = far.size();
  if (far.empty()) {
    rep.note = "empty far region";
    return rep;
  }
  const std::vector<double> vals = evaluate_all(exp, Objective::wri_closed_form(alpha), far, jobs);
  rep.computed = far[argmin_index(vals)];
  rep.flat_variation = relative_variation(vals);
  if (flat) {
    rep.monotone = true;
    const bool ok = rep.flat_variation <= 1e-9;
    rep.status = ok ? TheoremStatus::pass : TheoremStatus::fail;
    rep.note = "beta = 0: far-region values constant";
    return rep;
  }
  rep.monotone = monotone(vals, rep.beta > 0.0 ? 1 : -1);
  const bool at_bound = within_cell(rep.computed, rep.predicted, rep.tolerance);
  rep.status = at_bound && rep.monotone ? TheoremStatus::pass : TheoremStatus::fail;
  std::ostringstream note;
  note << (rep.beta > 0.0 ? "beta > 0" : "beta < 0");
  if (!at_bound) note << "; far-region argmin is not at the predicted bound";
  if (!rep.monotone) note << "; monotonicity in c^2 does not match sign(beta)";
  rep.note = note.str();
  return rep;
}

AlphaSweepReport alpha_sweep_argmin(const Experiment& exp, const std::vector<double>& alphas,
                                    const ScanSpec& spec, unsigned jobs) {
  check_scan_range(exp.geo, spec);
  for (double a : alphas)
    if (!(beta_parameter(exp.geo, exp.c_star, a) > 0.0))
      throw DomainError("alpha_sweep_argmin: every alpha must give beta > 0");
  AlphaSweepReport rep;
  rep.alphas = alphas;
  rep.far_region_identical = true;
  rep.all_at_c_min = true;
  std::vector<double> reference;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const std::vector<double> far = far_region(exp, spec);
    if (k == 0) reference = far;
    rep.far_region_identical = rep.far_region_identical && far == reference;
    if (far.empty()) {
      rep.argmins.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.far_values.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.all_at_c_min = false;
      continue;
    }
    const auto vals = evaluate_all(exp, Objective::wri_closed_form(alphas[k]), far, jobs);
    const std::size_t i = argmin_index(vals);
    rep.argmins.push_back(far[i]);
    rep.far_values.push_back(vals[i]);
    rep.all_at_c_min = rep.all_at_c_min && within_cell(far[i], exp.geo.c_min, spec.cell());
  }
  rep.pass = !alphas.empty() && rep.far_region_identical && rep.all_at_c_min;
  return rep;
}

NonsmoothnessReport nonsmoothness_diagnostic(const ProblemSetup& setup,
                                             const std::vector<double>& lambdas,
                                             const Objective& obj, unsigned jobs) {
  if (lambdas.size() < 3) throw DomainError("nonsmoothness_diagnostic: need at least 3 lambdas");
  const Geometry& geo = setup.geo;
  const double lambda0 = lambda_admissible_max(geo);
  for (double l : lambdas)
    if (!(l > 0.0 && l < lambda0))
      throw DomainError("nonsmoothness_diagnostic: every lambda must lie in (0, lambda_0)");

  const double range = geo.c_max - geo.c_min;
  const double h = 1e-6 * range;
  NonsmoothnessReport rep;
  rep.lambdas = lambdas;
  for (double lambda : lambdas) {
    const Experiment exp = setup.make(lambda);
    const auto points = static_cast<std::size_t>(std::ceil(range / (lambda / 10.0))) + 1;
    const std::vector<double> cs = ScanSpec::full(geo, points).values();
    std::vector<double> grad(cs.size());
    parallel_for(cs.size(), jobs, [&](std::size_t i) {
      const double lo = std::max(geo.c_min, cs[i] - h);
      const double hi = std::min(geo.c_max, cs[i] + h);
      grad[i] = (evaluate(exp, Velocity(hi), obj) - evaluate(exp, Velocity(lo), obj)) / (hi - lo);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < grad.size(); ++i)
      if (std::abs(grad[i]) > std::abs(grad[best])) best = i;
    rep.max_gradient.push_back(std::abs(grad[best]));
    rep.argmax_c.push_back(cs[best]);
  }

  const std::size_t n = lambdas.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += std::log(lambdas[k]);
    my += std::log(rep.max_gradient[k]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(lambdas[k]) - mx;
    sxy += dx * (std::log(rep.max_gradient[k]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw DomainError("nonsmoothness_diagnostic: lambdas must not all coincide");
  rep.slope = sxy / sxx;
  const auto [lo, hi] = std::minmax_element(rep.max_gradient.begin(), rep.max_gradient.end());
  rep.variation_ratio = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  return rep;
}

} // namespace wrilab
