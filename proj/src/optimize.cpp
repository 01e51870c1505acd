#include "wrilab/optimize.hpp"
#include "wrilab/analysis.hpp"
#include "wrilab/errors.hpp"
#include "wrilab/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace wrilab {

std::string to_string(BasinLabel label) {
  switch (label) {
    case BasinLabel::target: return "target";
    case BasinLabel::lower_bound: return "lower_bound";
    case BasinLabel::upper_bound: return "upper_bound";
    case BasinLabel::interior_spurious: return "interior_spurious";
  }
  return "unknown";
}

double fd_gradient(const Experiment& exp, const Objective& obj, double c, double h) {
  const Geometry& geo = exp.geo;
  const double lo = std::max(geo.c_min, c - h);
  const double hi = std::min(geo.c_max, c + h);
  return (evaluate(exp, Velocity(hi), obj) - evaluate(exp, Velocity(lo), obj)) / (hi - lo);
}

BasinLabel classify(const Experiment& exp, double c_final) {
  const Geometry& geo = exp.geo;
  const double radius = separation_scale(geo) * exp.wavelet.lambda();
  if (std::abs(c_final - exp.c_star.value) <= radius) return BasinLabel::target;
  const double cell = (geo.c_max - geo.c_min) / 2000.0;
  if (c_final - geo.c_min <= cell) return BasinLabel::lower_bound;
  if (geo.c_max - c_final <= cell) return BasinLabel::upper_bound;
  return BasinLabel::interior_spurious;
}

DescentReport descend(const Experiment& exp, const Objective& obj, double c0,
                      const DescentOptions& opts) {
  const Geometry& geo = exp.geo;
  if (!(c0 >= geo.c_min && c0 <= geo.c_max))
    throw DomainError("descend: start must lie in [c_min, c_max]");
  const double range = geo.c_max - geo.c_min;
  const double step0 = opts.initial_step > 0.0 ? opts.initial_step : range / 100.0;
  const double h = opts.fd_step > 0.0 ? opts.fd_step : 1e-6 * range;

  DescentReport rep;
  rep.c0 = c0;
  double c = c0;
  try {
    double f = evaluate(exp, Velocity(c), obj);
    rep.history.push_back(c);
    rep.values.push_back(f);
    rep.termination = "max_iterations";
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
      const double g = fd_gradient(exp, obj, c, h);
      rep.final_gradient = g;
      if (std::abs(g) <= opts.grad_tol) {
        rep.termination = "gradient";
        break;
      }
      const double dir = g > 0.0 ? -1.0 : 1.0;
      if ((dir < 0.0 && c <= geo.c_min) || (dir > 0.0 && c >= geo.c_max)) {
        rep.termination = "projected";
        break;
      }
      double step = step0;
      bool accepted = false;
      while (step > opts.step_tol) {
        const double trial = std::clamp(c + dir * step, geo.c_min, geo.c_max);
        const double ft = evaluate(exp, Velocity(trial), obj);
        if (ft <= f - opts.armijo * std::abs(g) * std::abs(trial - c)) {
          c = trial;
          f = ft;
          accepted = true;
          break;
        }
        step *= opts.backtrack;
      }
      if (!accepted) {
        rep.termination = "step";
        break;
      }
      rep.history.push_back(c);
      rep.values.push_back(f);
      rep.iterations = it + 1;
    }
    if (rep.termination != "gradient" && rep.termination != "projected")
      rep.final_gradient = fd_gradient(exp, obj, c, h);
  } catch (const std::exception& e) {
    rep.termination = std::string("error: ") + e.what();
  }
  rep.c_final = c;
  rep.label = classify(exp, c);
  return rep;
}

std::vector<DescentReport> basin_map(const Experiment& exp, const Objective& obj,
                                     const std::vector<double>& starts,
                                     const DescentOptions& opts, unsigned jobs) {
  for (double s : starts)
    if (!(s >= exp.geo.c_min && s <= exp.geo.c_max))
      throw DomainError("basin_map: starts must lie in [c_min, c_max]");
  std::vector<DescentReport> out(starts.size());
  parallel_for(starts.size(), jobs, [&](std::size_t i) { out[i] = descend(exp, obj, starts[i], opts); });
  return out;
}

std::vector<double> start_grid(const Geometry& geo, std::size_t n) {
  if (n < 2) throw DomainError("start_grid: need at least two starts");
  return ScanSpec::full(geo, n).values();
}

double golden_section_min(const Experiment& exp, const Objective& obj,
                          std::pair<double, double> bracket, double tol) {
  auto [a, b] = bracket;
  const Geometry& geo = exp.geo;
  if (!(std::isfinite(a) && std::isfinite(b)) || a > b || a < geo.c_min || b > geo.c_max)
    throw DomainError("golden_section_min: bracket must satisfy c_min <= a <= b <= c_max");
  if (!(tol > 0.0)) throw DomainError("golden_section_min: tolerance must be positive");
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double c) { return evaluate(exp, Velocity(c), obj); };
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

} // namespace wrilab
