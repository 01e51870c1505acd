#pragma once

// Uniform grids and sampled functions of time and of (z, t).
//
// Inner products use the rectangle rule with uniform weights, so the adjoint
// of any discrete linear map between these spaces is its plain transpose
// (up to the constant weight ratio).  All sampled functions are zero-extended
// outside their grids.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wrilab {

struct TimeGrid {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t n = 2;

  TimeGrid() = default;
  TimeGrid(double t0, double dt, std::size_t n);

  double at(std::size_t j) const { return t0 + static_cast<double>(j) * dt; }
  double last() const { return at(n - 1); }

  // Same sample positions, to a relative tolerance of a few ulps in dt.
  bool matches(const TimeGrid& other) const;
};

struct SpaceGrid {
  double z0 = 0.0;
  double dz = 1.0;
  std::size_t m = 2;

  SpaceGrid() = default;
  SpaceGrid(double z0, double dz, std::size_t m);

  double at(std::size_t i) const { return z0 + static_cast<double>(i) * dz; }
  bool matches(const SpaceGrid& other) const;
};

class Trace {
public:
  explicit Trace(TimeGrid grid);  // zeros
  Trace(TimeGrid grid, std::vector<double> samples);

  // Samples fn at every grid node.
  static Trace sample(const TimeGrid& grid, const std::function<double(double)>& fn);

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t j) const { return samples_[j]; }

  double norm() const;

  friend Trace operator+(const Trace& a, const Trace& b);
  friend Trace operator-(const Trace& a, const Trace& b);
  friend Trace operator*(double s, const Trace& a);

private:
  TimeGrid grid_;
  std::vector<double> samples_;
};

// Row-major samples f(z_i, t_j), i over space, j over time.
class Field {
public:
  Field(SpaceGrid space, TimeGrid time);  // zeros
  Field(SpaceGrid space, TimeGrid time, std::vector<double> samples);

  static Field sample(const SpaceGrid& space, const TimeGrid& time,
                      const std::function<double(double, double)>& fn);

  const SpaceGrid& space() const { return space_; }
  const TimeGrid& time() const { return time_; }
  std::span<const double> samples() const { return samples_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(samples_).subspan(i * time_.n, time_.n);
  }
  double operator()(std::size_t i, std::size_t j) const { return samples_[i * time_.n + j]; }

  double norm() const;

  friend Field operator*(double s, const Field& f);
  friend Field operator+(const Field& a, const Field& b);

private:
  SpaceGrid space_;
  TimeGrid time_;
  std::vector<double> samples_;
};

// dt * sum_j a_j b_j
double inner_product(const Trace& a, const Trace& b);
// dz * dt * sum_ij f_ij g_ij
double inner_product(const Field& f, const Field& g);

// Linear interpolation; exactly 0 outside [t0, t0 + (n-1) dt].
double eval_interp(const Trace& tr, double t);
double eval_interp(std::span<const double> samples, const TimeGrid& grid, double t);

// Trapezoid cumulative integral on the same grid, output[0] = 0.  The input
// is taken to vanish before the first sample.
Trace cumulative_integral(const Trace& tr);

// Index/weight pair for linear interpolation at t: value =
// (1 - frac) * s[index] + frac * s[index + 1].  index may lie outside
// [0, n-1); callers zero-extend.
struct InterpStencil {
  long index;
  double frac;
};
InterpStencil interp_stencil(const TimeGrid& grid, double t);

} // namespace wrilab
