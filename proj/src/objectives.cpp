#include "wrilab/objectives.hpp"
#include "wrilab/analysis.hpp"
#include "wrilab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wrilab {

namespace {

double sq(double x) { return x * x; }

void require_admissible(const Geometry& geo, Velocity c, const char* who) {
  if (!std::isfinite(c.value) || !geo.admissible(c)) {
    std::ostringstream msg;
    msg << who << ": velocity " << c.value << " outside [" << geo.c_min << ", " << geo.c_max << "]";
    throw DomainError(msg.str());
  }
}

} // namespace

// ---------------------------------------------------------------- Experiment

Experiment Experiment::consistent(const Geometry& geo, Velocity c_star, const Wavelet& w,
                                  double dt) {
  geo.validate();
  require_admissible(geo, c_star, "Experiment");
  return Experiment{geo, c_star, w, point_forward(geo, c_star, w, data_grid(geo, dt))};
}

void WriConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha > 0");
  if (!(cg_tol > 0.0)) throw ConfigError("cg_tol > 0");
  if (!(dz > 0.0)) throw ConfigError("dz > 0");
}

// ---------------------------------------------------------------- FWI

Trace residual(const Experiment& exp, Velocity c) {
  return exp.data - point_forward(exp.geo, c, exp.wavelet, exp.data.grid());
}

ObjectiveValue fwi_value(const Experiment& exp, Velocity c) {
  require_admissible(exp.geo, c, "fwi_value");
  const Trace r = residual(exp, c);
  ObjectiveValue out;
  out.value = 0.5 * inner_product(r, r);
  return out;
}

double fwi_plateau(const Experiment& exp, Velocity c) {
  const double lambda = exp.wavelet.lambda();
  const double L = separation_scale(exp.geo);
  if (!(lambda < lambda_admissible_max(exp.geo)))
    throw DomainError("fwi_plateau: requires lambda < lambda_0");
  if (!(std::abs(c.value - exp.c_star.value) > L * lambda))
    throw DomainError("fwi_plateau: requires |c - c_star| > L lambda");
  return 0.5 * (1.0 / (4.0 * sq(c.value)) + 1.0 / (4.0 * sq(exp.c_star.value)));
}

// ---------------------------------------------------------------- WRI

ObjectiveValue wri_value(const Experiment& exp, Velocity c, const WriConfig& cfg) {
  cfg.validate();
  require_admissible(exp.geo, c, "wri_value");
  const double a2 = sq(cfg.alpha);
  ObjectiveValue out;

  if (cfg.route == WriRoute::closed_form) {
    const double k = normal_constant(exp.geo, c);
    out.value = a2 / (k + a2) * fwi_value(exp, c).value;
    out.route = "closed_form";
    out.half_weight_value = 0.5 * out.value;
    return out;
  }

  const OperatorGrids grids = make_operator_grids(exp.geo, cfg.dz, exp.data.grid().dt);
  if (!grids.data.matches(exp.data.grid()))
    throw DomainError("wri_value: experiment data is not on the operator data grid");
  const LinearMap S = make_discrete_S(exp.geo, c, grids, cfg.interp);
  const Trace r = residual(exp, c);
  const CgReport cg = cg_solve_dataspace(S, cfg.alpha, r, cfg.cg_tol, cfg.cg_maxiter);

  const Field g = S.apply_adjoint(cg.solution);
  const Trace misfit = r - S.apply(g);
  out.value = 0.5 * a2 * inner_product(cg.solution, r);
  out.route = "variational";
  out.cg_iterations = cg.iterations;
  out.cg_converged = cg.converged;
  out.cg_relative_residual = cg.final_relative_residual;
  out.misfit_term = 0.5 * inner_product(misfit, misfit);
  out.penalty_term = 0.5 * a2 * inner_product(g, g);
  out.recombined = out.misfit_term + out.penalty_term;
  out.half_weight_value = 0.5 * out.value;
  return out;
}

double weight_multiplier(const Geometry& geo, Velocity c, double alpha) {
  const double a2 = sq(alpha);
  return 0.5 * a2 / (normal_constant(geo, c) + a2);
}

Trace weight_apply(const Experiment& exp, Velocity c, double alpha, const Trace& r,
                   WeightPath path, double dz, double cg_tol) {
  if (!(alpha > 0.0)) throw DomainError("weight_apply: alpha must be positive");
  if (path == WeightPath::scalar) return weight_multiplier(exp.geo, c, alpha) * r;
  const OperatorGrids grids = make_operator_grids(exp.geo, dz, r.grid().dt);
  const LinearMap S = make_discrete_S(exp.geo, c, grids, TimeInterp::bandlimited);
  const CgReport cg = cg_solve_dataspace(S, alpha, r, cg_tol);
  if (!cg.converged) throw NumericalBreakdown("weight_apply: conjugate gradients did not converge");
  return (0.5 * sq(alpha)) * cg.solution;
}

// ---------------------------------------------------------------- annihilator

double annihilator_value(const Experiment& exp, Velocity c, AnnihilatorVariant variant) {
  require_admissible(exp.geo, c, "annihilator_value");
  // Substituting s = t + tau(c): int t^k u(t)^2 dt = (1/4c^2) int (s - tau)^k d(s)^2 ds.
  const double tau = transit_time(exp.geo, c);
  const TimeGrid& g = exp.data.grid();
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double d2 = sq(exp.data[j]);
    const double shift = g.at(j) - tau;
    m0 += d2;
    m1 += shift * d2;
    m2 += shift * shift * d2;
  }
  const double scale = g.dt / (4.0 * sq(c.value));
  switch (variant) {
    case AnnihilatorVariant::signed_moment: return scale * m1;
    case AnnihilatorVariant::squared: return scale * m2;
    case AnnihilatorVariant::normalized:
      if (!(m0 > 0.0)) throw DomainError("annihilator_value: normalized variant of zero data");
      return m2 / m0;
  }
  return 0.0;
}

// ---------------------------------------------------------------- quadratic form

QuadraticFormReport quadratic_form_checks(const Experiment& exp, Velocity c) {
  require_admissible(exp.geo, c, "quadratic_form_checks");
  const Geometry& geo = exp.geo;
  const Wavelet& w = exp.wavelet;
  const double lambda = w.lambda();
  const double tau = transit_time(geo, c);
  const double tau_star = transit_time(geo, exp.c_star);
  if (!(tau + lambda < geo.T && tau_star + lambda < geo.T))
    throw DomainError("quadratic_form_checks: predicted pulses must lie inside (0, T)");

  const TimeGrid& grid = exp.data.grid();
  const ShiftedPulse d_pulse = point_forward(geo, exp.c_star, ShiftedPulse{});
  const ShiftedPulse source = point_right_inverse(geo, exp.c_star, d_pulse);
  const Trace b = point_forward(geo, c, source).sample(w, grid);
  const Trace& d = exp.data;

  QuadraticFormReport rep;
  rep.direct = fwi_value(exp, c).value;
  const Trace diff = d - b;
  rep.reconstructed = 0.5 * inner_product(diff, diff);
  rep.constant_term = 0.5 * inner_product(d, d);
  rep.smooth_term = 0.5 * inner_product(b, b);
  rep.cross_term = inner_product(d, b);
  rep.expansion_minus = rep.constant_term + rep.smooth_term - rep.cross_term;
  rep.expansion_plus = rep.constant_term + rep.smooth_term + rep.cross_term;

  // G = S_p[c]^T applied to d; A = (S_p[c]^T S_p[c*])^{-1}.  Both act on the
  // pulse family by scale and shift: S_p[c]^T S_p[c*] scales by 1/(4 c c*)
  // and delays by tau* - tau.
  const ShiftedPulse u = point_adjoint(geo, c, d_pulse);
  const double kappa = 1.0 / (4.0 * c.value * exp.c_star.value);
  const double sigma = tau_star - tau;
  const ShiftedPulse au{u.amplitude / kappa, u.delay - sigma};
  const double lo = std::min(u.delay, au.delay) - grid.dt;
  const double hi = std::max(u.delay, au.delay) + lambda + grid.dt;
  const TimeGrid cover(lo, grid.dt, static_cast<std::size_t>(std::ceil((hi - lo) / grid.dt)) + 1);
  rep.cross_term_adjoint_form = inner_product(u.sample(w, cover), au.sample(w, cover));

  rep.reconstruction_residual = std::abs(rep.reconstructed - rep.direct);
  rep.expansion_residual = std::abs(rep.expansion_minus - rep.direct);
  rep.plus_sign_residual = std::abs(rep.expansion_plus - rep.direct);
  rep.cross_term_residual = std::abs(rep.cross_term - rep.cross_term_adjoint_form);
  return rep;
}

// ---------------------------------------------------------------- generic objective

Objective Objective::fwi() { return Objective{}; }

Objective Objective::wri_closed_form(double alpha) {
  Objective o;
  o.kind = ObjectiveKind::wri;
  o.wri.alpha = alpha;
  o.wri.route = WriRoute::closed_form;
  return o;
}

Objective Objective::annihilator(AnnihilatorVariant v) {
  Objective o;
  o.kind = ObjectiveKind::annihilator;
  o.variant = v;
  return o;
}

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::fwi: return "fwi";
    case ObjectiveKind::wri: return "wri";
    case ObjectiveKind::annihilator: return "annihilator";
  }
  return "unknown";
}

std::string to_string(AnnihilatorVariant v) {
  switch (v) {
    case AnnihilatorVariant::signed_moment: return "signed";
    case AnnihilatorVariant::squared: return "squared";
    case AnnihilatorVariant::normalized: return "normalized";
  }
  return "unknown";
}

std::string Objective::label() const {
  switch (kind) {
    case ObjectiveKind::fwi: return "fwi";
    case ObjectiveKind::wri: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "wri_a%.6g", wri.alpha);
      return buf;
    }
    case ObjectiveKind::annihilator: return "ann_" + to_string(variant);
  }
  return "unknown";
}

double evaluate(const Experiment& exp, Velocity c, const Objective& obj) {
  switch (obj.kind) {
    case ObjectiveKind::fwi: return fwi_value(exp, c).value;
    case ObjectiveKind::wri: return wri_value(exp, c, obj.wri).value;
    case ObjectiveKind::annihilator: return annihilator_value(exp, c, obj.variant);
  }
  return 0.0;
}

// ---------------------------------------------------------------- gradients

double gradient(const Experiment& exp, Velocity c, const Objective& obj, GradientMethod method,
                double h) {
  if (method == GradientMethod::analytic_fwi) {
    if (obj.kind != ObjectiveKind::fwi)
      throw DomainError("gradient: analytic path is only available for FWI");
    if (!exp.wavelet.supports(WaveletMode::derivative))
      throw UnsupportedMode("gradient: analytic path needs the wavelet derivative");
    require_admissible(exp.geo, c, "gradient");
    const double cv = c.value;
    const double tau = transit_time(exp.geo, c);
    const Wavelet& w = exp.wavelet;
    const Trace r = point_forward(exp.geo, c, w, exp.data.grid()) - exp.data;
    const Trace dp = Trace::sample(exp.data.grid(), [&](double t) {
      return -w(t - tau) / (2.0 * cv * cv) +
             (tau / (2.0 * cv * cv)) * w.eval(t - tau, WaveletMode::derivative);
    });
    return inner_product(r, dp);
  }
  if (!(h > 0.0)) throw DomainError("gradient: step h must be positive");
  const Velocity lo(c.value - h), hi(c.value + h);
  if (!exp.geo.admissible(lo) || !exp.geo.admissible(hi))
    throw DomainError("gradient: c +- h must be admissible for central differences");
  return (evaluate(exp, hi, obj) - evaluate(exp, lo, obj)) / (2.0 * h);
}

} // namespace wrilab
