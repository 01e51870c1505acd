#pragma once

// Constant-coefficient 1D acoustics: closed-form Green's function and
// space-time source solutions, the point-source and general modeling
// operators with the adjoint of the latter, and the extension operator that
// replaces a point source by an equivalent square-integrable source field.

#include "wrilab/grid.hpp"

#include <functional>
#include <memory>
#include <string>

namespace wrilab {

struct Velocity {
  double value;
  constexpr explicit Velocity(double v) : value(v) {}
};

// Fixed experiment description.  validate() throws ConfigError naming the
// first violated invariant.
struct Geometry {
  double z_min = 0.0;
  double z_max = 1.0;
  double z_s = 0.3;
  double z_r = 0.8;
  double T = 1.5;
  double rho = 1.0;
  double c_min = 0.5;
  double c_max = 2.0;

  void validate() const;

  double offset() const;  // |z_s - z_r|
  double length() const { return z_max - z_min; }
  bool admissible(Velocity c) const { return c.value >= c_min && c.value <= c_max; }
  // Largest |z_r - z| / c_min over [z_min, z_max]: how far back in time the
  // general operator reaches.
  double max_lag() const;
};

// Reference configuration used throughout the tests and the CLI preset.
Geometry cfg0_geometry();

enum class WaveletKind { bump, bump_derivative, tabulated };
enum class WaveletMode { value, derivative, antiderivative };

std::string to_string(WaveletKind kind);
WaveletKind wavelet_kind_from_string(const std::string& name);

// w_lambda(t) = lambda^{-1/2} w_1(t / lambda) with w_1 supported in (0, 1)
// and normalized to unit L2 norm, so that every member has unit norm.
//
// bump:            w_1 proportional to exp(-1 / (x (1 - x)))
// bump_derivative: w_1 proportional to the derivative of the bump (zero mean)
// tabulated:       w_1 linearly interpolated from samples on [0, 1]
class Wavelet {
public:
  static Wavelet bump(double lambda);
  static Wavelet bump_derivative(double lambda);
  static Wavelet tabulated(const Trace& mother, double lambda);
  static Wavelet of_kind(WaveletKind kind, double lambda);

  WaveletKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double norm_constant() const { return norm_; }

  double operator()(double t) const { return eval(t, WaveletMode::value); }
  // Throws UnsupportedMode for tabulated + derivative.
  double eval(double t, WaveletMode mode) const;
  bool supports(WaveletMode mode) const;

  // Same mother wavelet at a different scale.
  Wavelet rescaled(double lambda) const;

private:
  Wavelet(WaveletKind kind, double lambda, double norm);

  WaveletKind kind_;
  double lambda_;
  double norm_;
  std::shared_ptr<const Trace> table_;
  std::shared_ptr<const Trace> table_integral_;
};

double transit_time(const Geometry& geo, Velocity c);

struct PressureVelocity {
  double p;
  double v;
};

// Point source w(t) delta(z - z_s).
PressureVelocity green_solution(const Geometry& geo, Velocity c, const Wavelet& w, double z,
                                double t);
// Space-time source f, by rectangle rule in z and linear interpolation in t.
PressureVelocity field_solution(const Geometry& geo, Velocity c, const Field& f, double z,
                                double t);

// S_p[c] w sampled on out_grid, analytic in w.
Trace point_forward(const Geometry& geo, Velocity c, const Wavelet& w, const TimeGrid& out_grid);

// Grids of the general operator S[c]: cell-centred z samples covering
// [z_min, z_max] exactly, a data grid on [0, T], and a field time grid that
// starts early enough that no forward time shift falls off its start.
struct OperatorGrids {
  SpaceGrid space;
  TimeGrid field_time;
  TimeGrid data;
};
OperatorGrids make_operator_grids(const Geometry& geo, double dz, double dt);

// Data grid {0, dt, ..., <= T}.
TimeGrid data_grid(const Geometry& geo, double dt);

// (S[c] f)(t) = (1/2c) sum_i dz f(z_i, t - |z_r - z_i| / c), linear in time.
Trace forward_general(const Geometry& geo, Velocity c, const Field& f, const TimeGrid& out_grid);

// Exact transpose of forward_general with respect to the rectangle-rule
// inner products.
Field adjoint_general(const Geometry& geo, Velocity c, const Trace& e, const SpaceGrid& space,
                      const TimeGrid& field_time);

// (S[c]^T e)(z, t) = (1/2c) e(t + |z_r - z| / c), e taken as zero outside
// [0, T], sampled directly from a callable.
Field adjoint_general_sampled(const Geometry& geo, Velocity c,
                              const std::function<double(double)>& e, const SpaceGrid& space,
                              const TimeGrid& field_time);

// S[c] S[c]^T = k(c) I with k(c) = (z_max - z_min) / (4 c^2).
double normal_constant(const Geometry& geo, Velocity c);

// Largest admissible mollifier radius (exclusive).
double mollifier_eps_limit(const Geometry& geo);
double default_mollifier_eps(const Geometry& geo);

// phi = 1 for |z - z_s| <= eps/2, 0 for |z - z_s| >= eps, quintic smoothstep
// between.  order selects phi, phi' or phi''.
double mollifier(const Geometry& geo, double eps, double z, int order);

// Square-integrable source field E[c] w whose pressure at the receiver
// matches that of the point source.
Field extension_source(const Geometry& geo, Velocity c, const Wavelet& w, double eps,
                       const SpaceGrid& space, const TimeGrid& time);

// t -> 2c d(t + tau(c)), zero-extended.
Trace point_right_inverse(const Geometry& geo, Velocity c, const Trace& d,
                          const TimeGrid& out_grid);

// amplitude * w(t - delay).  Compositions of S_p[c], its right inverse and
// its adjoint map this family to itself, so they can be carried out without
// any resampling.
struct ShiftedPulse {
  double amplitude = 1.0;
  double delay = 0.0;

  double operator()(const Wavelet& w, double t) const { return amplitude * w(t - delay); }
  Trace sample(const Wavelet& w, const TimeGrid& grid) const;
};

ShiftedPulse point_forward(const Geometry& geo, Velocity c, const ShiftedPulse& p);
ShiftedPulse point_right_inverse(const Geometry& geo, Velocity c, const ShiftedPulse& p);
ShiftedPulse point_adjoint(const Geometry& geo, Velocity c, const ShiftedPulse& p);

} // namespace wrilab
