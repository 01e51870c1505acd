#pragma once

// Objective functions of the velocity c: least-squares data fit (FWI), its
// source-extended penalty relaxation (WRI) evaluated either by variable
// projection or by the scalar closed form, the residual weight operator, the
// annihilator quadratic forms, and gradients.

#include "wrilab/acoustics.hpp"
#include "wrilab/grid.hpp"
#include "wrilab/linear_ops.hpp"

#include <cstddef>
#include <string>

namespace wrilab {

// A fixed inverse problem: geometry, target velocity, wavelet and the
// consistent data d = S_p[c_star] w on the data grid.
struct Experiment {
  Geometry geo;
  Velocity c_star;
  Wavelet wavelet;
  Trace data;

  // Consistent data sampled on data_grid(geo, dt).
  static Experiment consistent(const Geometry& geo, Velocity c_star, const Wavelet& w, double dt);
};

enum class WriRoute { variational, closed_form };

struct WriConfig {
  double alpha = 0.25;
  WriRoute route = WriRoute::closed_form;
  double cg_tol = 1e-10;
  std::size_t cg_maxiter = 0;  // 0 selects 10 n
  double dz = 1.0 / 400.0;     // z step of the extended-source grid
  TimeInterp interp = TimeInterp::bandlimited;

  void validate() const;
};

struct ObjectiveValue {
  double value = 0.0;

  // WRI diagnostics; zero / empty for other objectives.
  std::string route;
  std::size_t cg_iterations = 0;
  bool cg_converged = true;
  double cg_relative_residual = 0.0;
  double misfit_term = 0.0;   // (1/2) ||r - S g||^2 at the optimal g = S^T e
  double penalty_term = 0.0;  // (alpha^2/2) ||g||^2
  double recombined = 0.0;    // misfit_term + penalty_term
  // Value with the weight operator's extra factor 1/2, i.e.
  // (1/2) <r, (alpha^2/2) (S S^T + alpha^2)^{-1} r>.
  double half_weight_value = 0.0;
};

// (1/2) || S_p[c] w - d ||^2.
ObjectiveValue fwi_value(const Experiment& exp, Velocity c);

// Far-region value (1/2)(1/(4c^2) + 1/(4 c_star^2)) ||w_1||^2.  Throws
// DomainError unless |c - c_star| > L lambda and lambda < lambda_0.
double fwi_plateau(const Experiment& exp, Velocity c);

// d - S_p[c] w.
Trace residual(const Experiment& exp, Velocity c);

// min_g (1/2)(||r - S g||^2 + alpha^2 ||g||^2).
ObjectiveValue wri_value(const Experiment& exp, Velocity c, const WriConfig& cfg);

enum class WeightPath { cg, scalar };

// (alpha^2/2)(S S^T + alpha^2 I)^{-1} r.  The scalar path multiplies by
// u(c) = (alpha^2/2)/(k(c) + alpha^2).
Trace weight_apply(const Experiment& exp, Velocity c, double alpha, const Trace& r,
                   WeightPath path = WeightPath::cg, double dz = 1.0 / 400.0,
                   double cg_tol = 1e-10);
double weight_multiplier(const Geometry& geo, Velocity c, double alpha);

enum class AnnihilatorVariant { signed_moment, squared, normalized };

// With u(t) = (1/2c) d(t + tau(c)):
//   signed_moment: int t u^2,  squared: int t^2 u^2,
//   normalized: int t^2 u^2 / int u^2 (DomainError when u = 0).
double annihilator_value(const Experiment& exp, Velocity c, AnnihilatorVariant variant);

struct QuadraticFormReport {
  double direct = 0.0;            // fwi_value
  double reconstructed = 0.0;     // (1/2) ||(I - S_p[c] S_p[c*]^{-1}) d||^2
  double constant_term = 0.0;     // (1/2) ||d||^2
  double smooth_term = 0.0;       // (1/2) ||S_p[c] S_p[c*]^{-1} d||^2
  double cross_term = 0.0;        // <d, S_p[c] S_p[c*]^{-1} d>
  double expansion_minus = 0.0;   // constant + smooth - cross
  double expansion_plus = 0.0;    // constant + smooth + cross
  double cross_term_adjoint_form = 0.0;  // <S_p^T d, (S_p^T S_p[c*])^{-1} S_p^T d>
  double reconstruction_residual = 0.0;  // |reconstructed - direct|
  double expansion_residual = 0.0;       // |expansion_minus - direct|
  double plus_sign_residual = 0.0;       // |expansion_plus - direct|
  double cross_term_residual = 0.0;      // |cross_term - cross_term_adjoint_form|
};

// Throws DomainError unless both predicted pulses lie inside (0, T).
QuadraticFormReport quadratic_form_checks(const Experiment& exp, Velocity c);

enum class ObjectiveKind { fwi, wri, annihilator };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::fwi;
  WriConfig wri{};
  AnnihilatorVariant variant = AnnihilatorVariant::normalized;

  static Objective fwi();
  static Objective wri_closed_form(double alpha);
  static Objective annihilator(AnnihilatorVariant v);

  std::string label() const;
};

std::string to_string(ObjectiveKind kind);
std::string to_string(AnnihilatorVariant v);

double evaluate(const Experiment& exp, Velocity c, const Objective& obj);

enum class GradientMethod { analytic_fwi, central_fd };

// dJ/dc.  analytic_fwi requires obj.kind == fwi and a wavelet with a
// derivative mode; central_fd requires c +- h admissible.  h <= 0 throws.
double gradient(const Experiment& exp, Velocity c, const Objective& obj, GradientMethod method,
                double h = 1e-5);

} // namespace wrilab
