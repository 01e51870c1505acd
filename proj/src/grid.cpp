#include "wrilab/grid.hpp"

#include "wrilab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace wrilab {

namespace {

bool close(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-12 * scale;
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite sample");
  }
}

} // namespace

TimeGrid::TimeGrid(double t0_, double dt_, std::size_t n_) : t0(t0_), dt(dt_), n(n_) {
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0))
    throw DomainError("TimeGrid: dt must be positive and finite");
  if (n < 2) throw DomainError("TimeGrid: need at least 2 samples");
}

bool TimeGrid::matches(const TimeGrid& o) const {
  const double scale = std::max({std::abs(t0), std::abs(o.t0), dt * static_cast<double>(n)});
  return n == o.n && close(dt, o.dt, dt) && close(t0, o.t0, scale);
}

SpaceGrid::SpaceGrid(double z0_, double dz_, std::size_t m_) : z0(z0_), dz(dz_), m(m_) {
  if (!(dz > 0.0) || !std::isfinite(dz) || !std::isfinite(z0))
    throw DomainError("SpaceGrid: dz must be positive and finite");
  if (m < 2) throw DomainError("SpaceGrid: need at least 2 samples");
}

bool SpaceGrid::matches(const SpaceGrid& o) const {
  const double scale = std::max({std::abs(z0), std::abs(o.z0), dz * static_cast<double>(m)});
  return m == o.m && close(dz, o.dz, dz) && close(z0, o.z0, scale);
}

// ---------------------------------------------------------------- Trace

Trace::Trace(TimeGrid grid) : grid_(grid), samples_(grid.n, 0.0) {}

Trace::Trace(TimeGrid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.n) throw DomainError("Trace: sample count does not match grid");
  require_finite(samples_, "Trace");
}

Trace Trace::sample(const TimeGrid& grid, const std::function<double(double)>& fn) {
  std::vector<double> s(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) s[j] = fn(grid.at(j));
  return Trace(grid, std::move(s));
}

double Trace::norm() const { return std::sqrt(inner_product(*this, *this)); }

Trace operator+(const Trace& a, const Trace& b) {
  if (!a.grid_.matches(b.grid_)) throw DomainError("Trace +: grid mismatch");
  std::vector<double> s(a.samples_);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] += b.samples_[j];
  return Trace(a.grid_, std::move(s));
}

Trace operator-(const Trace& a, const Trace& b) {
  if (!a.grid_.matches(b.grid_)) throw DomainError("Trace -: grid mismatch");
  std::vector<double> s(a.samples_);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] -= b.samples_[j];
  return Trace(a.grid_, std::move(s));
}

Trace operator*(double k, const Trace& a) {
  std::vector<double> s(a.samples_);
  for (double& x : s) x *= k;
  return Trace(a.grid_, std::move(s));
}

// ---------------------------------------------------------------- Field

Field::Field(SpaceGrid space, TimeGrid time)
    : space_(space), time_(time), samples_(space.m * time.n, 0.0) {}

Field::Field(SpaceGrid space, TimeGrid time, std::vector<double> samples)
    : space_(space), time_(time), samples_(std::move(samples)) {
  if (samples_.size() != space_.m * time_.n)
    throw DomainError("Field: sample count does not match grids");
  require_finite(samples_, "Field");
}

Field Field::sample(const SpaceGrid& space, const TimeGrid& time,
                    const std::function<double(double, double)>& fn) {
  std::vector<double> s(space.m * time.n);
  for (std::size_t i = 0; i < space.m; ++i) {
    const double z = space.at(i);
    for (std::size_t j = 0; j < time.n; ++j) s[i * time.n + j] = fn(z, time.at(j));
  }
  return Field(space, time, std::move(s));
}

double Field::norm() const { return std::sqrt(inner_product(*this, *this)); }

Field operator*(double k, const Field& f) {
  std::vector<double> s(f.samples_);
  for (double& x : s) x *= k;
  return Field(f.space_, f.time_, std::move(s));
}

Field operator+(const Field& a, const Field& b) {
  if (!a.space_.matches(b.space_) || !a.time_.matches(b.time_))
    throw DomainError("Field +: grid mismatch");
  std::vector<double> s(a.samples_);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] += b.samples_[k];
  return Field(a.space_, a.time_, std::move(s));
}

// ---------------------------------------------------------------- free functions

double inner_product(const Trace& a, const Trace& b) {
  if (!a.grid().matches(b.grid())) throw DomainError("inner_product(Trace): grid mismatch");
  const auto x = a.samples();
  const auto y = b.samples();
  return a.grid().dt * std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double inner_product(const Field& f, const Field& g) {
  if (!f.space().matches(g.space()) || !f.time().matches(g.time()))
    throw DomainError("inner_product(Field): grid mismatch");
  const auto x = f.samples();
  const auto y = g.samples();
  return f.space().dz * f.time().dt * std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

InterpStencil interp_stencil(const TimeGrid& grid, double t) {
  const double u = (t - grid.t0) / grid.dt;
  const double fl = std::floor(u);
  return {static_cast<long>(fl), u - fl};
}

double eval_interp(std::span<const double> s, const TimeGrid& g, double t) {
  const double u = (t - g.t0) / g.dt;
  const double last = static_cast<double>(g.n - 1);
  if (!(u >= 0.0) || u > last) return 0.0;
  if (u == last) return s[g.n - 1];
  const double fl = std::floor(u);
  const auto j = static_cast<std::size_t>(fl);
  const double frac = u - fl;
  if (frac == 0.0) return s[j];
  return (1.0 - frac) * s[j] + frac * s[j + 1];
}

double eval_interp(const Trace& tr, double t) { return eval_interp(tr.samples(), tr.grid(), t); }

Trace cumulative_integral(const Trace& tr) {
  const auto s = tr.samples();
  std::vector<double> out(s.size(), 0.0);
  const double half = 0.5 * tr.grid().dt;
  for (std::size_t j = 1; j < s.size(); ++j) out[j] = out[j - 1] + half * (s[j - 1] + s[j]);
  return Trace(tr.grid(), std::move(out));
}

} // namespace wrilab
