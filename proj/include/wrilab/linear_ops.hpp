#pragma once

#include "wrilab/acoustics.hpp"
#include "wrilab/grid.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace wrilab {

// Matrix-free operator from fields on (space, field_time) to traces on range.
// Immutable; copies share the underlying callables.
class LinearMap {
public:
  using ApplyFn = std::function<Trace(const Field&)>;
  using AdjointFn = std::function<Field(const Trace&)>;

  LinearMap(SpaceGrid space, TimeGrid field_time, TimeGrid range, ApplyFn apply,
            AdjointFn adjoint);

  Trace apply(const Field& f) const;
  Field apply_adjoint(const Trace& e) const;

  const SpaceGrid& domain_space() const { return space_; }
  const TimeGrid& domain_time() const { return field_time_; }
  const TimeGrid& range() const { return range_; }

private:
  SpaceGrid space_;
  TimeGrid field_time_;
  TimeGrid range_;
  ApplyFn apply_;
  AdjointFn adjoint_;
};

// How S[c] evaluates f(z_i, t - |z_r - z_i|/c) between time samples.
//   linear:      linear interpolation, the stencil used by forward_general.
//   bandlimited: exact shift of the band-limited (periodic, FFT) interpolant;
//                S S^T then equals k(c) I up to the spectral tail of the
//                data, instead of up to O(dt^2).
enum class TimeInterp { linear, bandlimited };

LinearMap make_discrete_S(const Geometry& geo, Velocity c, const OperatorGrids& grids,
                          TimeInterp interp = TimeInterp::linear);

// max over trials of |<A x, y> - <x, A^T y>| / (||A x|| ||y|| + tiny), with
// x, y uniform(-1, 1) from a fixed-seed generator.
double adjoint_test(const LinearMap& op, std::size_t trials, std::uint64_t seed);

struct CgReport {
  Trace solution;
  std::size_t iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // relative residual norms, first entry 1
};

// Conjugate gradients on e -> S (S^T e) + alpha^2 e.  maxiter = 0 selects
// 10 n.  Throws NumericalBreakdown on non-finite iterates.
CgReport cg_solve_dataspace(const LinearMap& op, double alpha, const Trace& rhs,
                            double tol = 1e-10, std::size_t maxiter = 0);

} // namespace wrilab
