#include "wrilab/acoustics.hpp"
#include "wrilab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wrilab {

namespace {

double sgn(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

} // namespace

// ---------------------------------------------------------------- Geometry

void Geometry::validate() const {
  const double all[] = {z_min, z_max, z_s, z_r, T, rho, c_min, c_max};
  for (double v : all)
    if (!std::isfinite(v)) throw ConfigError("geometry values must be finite");
  if (!(z_min < z_max)) throw ConfigError("z_min < z_max");
  if (!(z_min < z_s && z_s < z_max)) throw ConfigError("z_min < z_s < z_max");
  if (z_s == z_r) throw ConfigError("z_s != z_r");
  if (!(rho > 0.0)) throw ConfigError("rho > 0");
  if (!(c_min > 0.0)) throw ConfigError("c_min > 0");
  if (!(c_min <= c_max)) throw ConfigError("c_min <= c_max");
  if (!(offset() / c_min < T))
    throw ConfigError("transit condition |z_s - z_r| / c_min < T");
}

double Geometry::offset() const { return std::abs(z_s - z_r); }

double Geometry::max_lag() const { return std::max(z_r - z_min, z_max - z_r) / c_min; }

Geometry cfg0_geometry() { return Geometry{}; }

double transit_time(const Geometry& geo, Velocity c) { return geo.offset() / c.value; }

// ---------------------------------------------------------------- solutions

PressureVelocity green_solution(const Geometry& geo, Velocity c, const Wavelet& w, double z,
                                double t) {
  const double cv = c.value;
  const double wt = w(t - std::abs(z - geo.z_s) / cv);
  return {wt / (2.0 * cv), sgn(z - geo.z_s) * wt / (2.0 * geo.rho * cv * cv)};
}

PressureVelocity field_solution(const Geometry& geo, Velocity c, const Field& f, double z,
                                double t) {
  const double cv = c.value;
  const auto& sp = f.space();
  double p = 0.0, v = 0.0;
  for (std::size_t i = 0; i < sp.m; ++i) {
    const double z1 = sp.at(i);
    const double val = eval_interp(f.row(i), f.time(), t - std::abs(z - z1) / cv);
    p += val;
    v += sgn(z - z1) * val;
  }
  return {sp.dz * p / (2.0 * cv), sp.dz * v / (2.0 * geo.rho * cv * cv)};
}

Trace point_forward(const Geometry& geo, Velocity c, const Wavelet& w, const TimeGrid& out_grid) {
  const double tau = transit_time(geo, c);
  const double amp = 1.0 / (2.0 * c.value);
  return Trace::sample(out_grid, [&](double t) { return amp * w(t - tau); });
}

// ---------------------------------------------------------------- grids

TimeGrid data_grid(const Geometry& geo, double dt) {
  if (!(dt > 0.0)) throw DomainError("data_grid: dt must be positive");
  const auto n = static_cast<std::size_t>(std::floor(geo.T / dt + 1e-9)) + 1;
  return TimeGrid(0.0, dt, n);
}

OperatorGrids make_operator_grids(const Geometry& geo, double dz, double dt) {
  if (!(dz > 0.0)) throw DomainError("make_operator_grids: dz must be positive");
  const auto m = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(geo.length() / dz)));
  const double dz_eff = geo.length() / static_cast<double>(m);
  const SpaceGrid space(geo.z_min + 0.5 * dz_eff, dz_eff, m);
  const TimeGrid data = data_grid(geo, dt);
  const auto back = static_cast<std::size_t>(std::ceil(geo.max_lag() / dt - 1e-9));
  const TimeGrid field_time(-static_cast<double>(back) * dt, dt, back + data.n);
  return {space, field_time, data};
}

// ---------------------------------------------------------------- general operator

// forward_general and adjoint_general share this traversal so that the
// adjoint is the exact transpose, rounding included.
template <class Visit>
static void for_each_stencil(const Geometry& geo, Velocity c, const SpaceGrid& space,
                             const TimeGrid& field_time, const TimeGrid& data, Visit&& visit) {
  const long nf = static_cast<long>(field_time.n);
  for (std::size_t i = 0; i < space.m; ++i) {
    const double shift = std::abs(geo.z_r - space.at(i)) / c.value;
    for (std::size_t j = 0; j < data.n; ++j) {
      const auto [idx, frac] = interp_stencil(field_time, data.at(j) - shift);
      if (idx >= 0 && idx < nf) visit(i, j, static_cast<std::size_t>(idx), 1.0 - frac);
      if (frac != 0.0 && idx + 1 >= 0 && idx + 1 < nf)
        visit(i, j, static_cast<std::size_t>(idx + 1), frac);
    }
  }
}

Trace forward_general(const Geometry& geo, Velocity c, const Field& f, const TimeGrid& out_grid) {
  std::vector<double> out(out_grid.n, 0.0);
  const auto s = f.samples();
  const std::size_t nf = f.time().n;
  for_each_stencil(geo, c, f.space(), f.time(), out_grid,
                   [&](std::size_t i, std::size_t j, std::size_t k, double weight) {
                     out[j] += weight * s[i * nf + k];
                   });
  const double scale = f.space().dz / (2.0 * c.value);
  for (double& x : out) x *= scale;
  return Trace(out_grid, std::move(out));
}

Field adjoint_general(const Geometry& geo, Velocity c, const Trace& e, const SpaceGrid& space,
                      const TimeGrid& field_time) {
  std::vector<double> g(space.m * field_time.n, 0.0);
  const auto es = e.samples();
  const std::size_t nf = field_time.n;
  for_each_stencil(geo, c, space, field_time, e.grid(),
                   [&](std::size_t i, std::size_t j, std::size_t k, double weight) {
                     g[i * nf + k] += weight * es[j];
                   });
  // <S f, e>_data = <f, S^T e>_field with weights dt_data and dz dt_field.
  const double scale = (e.grid().dt / field_time.dt) / (2.0 * c.value);
  for (double& x : g) x *= scale;
  return Field(space, field_time, std::move(g));
}

Field adjoint_general_sampled(const Geometry& geo, Velocity c,
                              const std::function<double(double)>& e, const SpaceGrid& space,
                              const TimeGrid& field_time) {
  const double amp = 1.0 / (2.0 * c.value);
  return Field::sample(space, field_time, [&](double z, double t) {
    const double arg = t + std::abs(geo.z_r - z) / c.value;
    if (arg < 0.0 || arg > geo.T) return 0.0;
    return amp * e(arg);
  });
}

double normal_constant(const Geometry& geo, Velocity c) {
  return geo.length() / (4.0 * c.value * c.value);
}

// ---------------------------------------------------------------- extension

double mollifier_eps_limit(const Geometry& geo) {
  return std::min({geo.offset(), geo.z_s - geo.z_min, geo.z_max - geo.z_s});
}

double default_mollifier_eps(const Geometry& geo) { return 0.5 * mollifier_eps_limit(geo); }

double mollifier(const Geometry& geo, double eps, double z, int order) {
  if (!(eps > 0.0 && eps < mollifier_eps_limit(geo))) {
    std::ostringstream msg;
    msg << "mollifier: eps must lie in (0, " << mollifier_eps_limit(geo) << ")";
    throw DomainError(msg.str());
  }
  if (order < 0 || order > 2) throw DomainError("mollifier: order must be 0, 1 or 2");
  const double r = std::abs(z - geo.z_s);
  const double u = 2.0 * r / eps - 1.0;
  if (u <= 0.0) return order == 0 ? 1.0 : 0.0;
  if (u >= 1.0) return 0.0;
  // q(u) = 1 - (10u^3 - 15u^4 + 6u^5)
  const double du = 2.0 / eps;
  switch (order) {
    case 0: return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
    case 1: return -30.0 * u * u * (1.0 - u) * (1.0 - u) * du * sgn(z - geo.z_s);
    default: return -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u) * du * du;
  }
}

Field extension_source(const Geometry& geo, Velocity c, const Wavelet& w, double eps,
                       const SpaceGrid& space, const TimeGrid& time) {
  (void)mollifier(geo, eps, geo.z_s, 0);  // validates eps
  const double cv = c.value;
  std::vector<double> out(space.m * time.n, 0.0);
  for (std::size_t i = 0; i < space.m; ++i) {
    const double z = space.at(i);
    const double d1 = mollifier(geo, eps, z, 1);
    const double d2 = mollifier(geo, eps, z, 2);
    if (d1 == 0.0 && d2 == 0.0) continue;
    const double lag = std::abs(z - geo.z_s) / cv;
    const double s = sgn(z - geo.z_s);
    // sgn w d_z(1 - phi) - (c/2) d_zz(1 - phi) W, with d_z(1 - phi) = -phi'.
    for (std::size_t j = 0; j < time.n; ++j) {
      const double t = time.at(j) - lag;
      out[i * time.n + j] =
          -s * w(t) * d1 + 0.5 * cv * d2 * w.eval(t, WaveletMode::antiderivative);
    }
  }
  return Field(space, time, std::move(out));
}

Trace point_right_inverse(const Geometry& geo, Velocity c, const Trace& d,
                          const TimeGrid& out_grid) {
  const double tau = transit_time(geo, c);
  const double amp = 2.0 * c.value;
  return Trace::sample(out_grid, [&](double t) { return amp * eval_interp(d, t + tau); });
}

// ---------------------------------------------------------------- shift-scale algebra

Trace ShiftedPulse::sample(const Wavelet& w, const TimeGrid& grid) const {
  return Trace::sample(grid, [&](double t) { return (*this)(w, t); });
}

ShiftedPulse point_forward(const Geometry& geo, Velocity c, const ShiftedPulse& p) {
  return {p.amplitude / (2.0 * c.value), p.delay + transit_time(geo, c)};
}

ShiftedPulse point_right_inverse(const Geometry& geo, Velocity c, const ShiftedPulse& p) {
  return {p.amplitude * 2.0 * c.value, p.delay - transit_time(geo, c)};
}

ShiftedPulse point_adjoint(const Geometry& geo, Velocity c, const ShiftedPulse& p) {
  return {p.amplitude / (2.0 * c.value), p.delay - transit_time(geo, c)};
}

} // namespace wrilab
