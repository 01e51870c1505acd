#include "wrilab/linear_ops.hpp"
#include "wrilab/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <random>

namespace wrilab {

LinearMap::LinearMap(SpaceGrid space, TimeGrid field_time, TimeGrid range, ApplyFn apply,
                     AdjointFn adjoint)
    : space_(space),
      field_time_(field_time),
      range_(range),
      apply_(std::move(apply)),
      adjoint_(std::move(adjoint)) {}

Trace LinearMap::apply(const Field& f) const {
  if (!f.space().matches(space_) || !f.time().matches(field_time_))
    throw DomainError("LinearMap::apply: field is not on the operator domain grids");
  return apply_(f);
}

Field LinearMap::apply_adjoint(const Trace& e) const {
  if (!e.grid().matches(range_))
    throw DomainError("LinearMap::apply_adjoint: trace is not on the operator range grid");
  return adjoint_(e);
}

namespace {

std::size_t next_fast_size(std::size_t n) {
  for (std::size_t p = n;; ++p) {
    std::size_t q = p;
    for (std::size_t f : {2u, 3u, 5u})
      while (q % f == 0) q /= f;
    if (q == 1) return p;
  }
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Applies S[c] by shifting each z row of the field with the exact
// Fourier-domain phase ramp on a zero-padded periodic buffer.  Buffer index k
// corresponds to field time index k; data index j sits at k = offset + j.
class BandlimitedS {
public:
  BandlimitedS(const Geometry& geo, Velocity c, const OperatorGrids& g)
      : space_(g.space),
        field_time_(g.field_time),
        data_(g.data),
        nf_(g.field_time.n),
        nd_(g.data.n),
        offset_(static_cast<std::size_t>(std::lround((g.data.t0 - g.field_time.t0) / g.data.dt))),
        amp_(1.0 / (2.0 * c.value)) {
    const auto back = static_cast<std::size_t>(std::ceil(geo.max_lag() / g.data.dt));
    len_ = next_fast_size(nf_ + back + 64);
    nspec_ = len_ / 2 + 1;

    phase_.resize(space_.m * nspec_);
    const double period = static_cast<double>(len_) * g.data.dt;
    for (std::size_t i = 0; i < space_.m; ++i) {
      const double shift = std::abs(geo.z_r - space_.at(i)) / c.value;
      for (std::size_t k = 0; k < nspec_; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) * shift / period;
        phase_[i * nspec_ + k] = std::polar(1.0, angle);
      }
      if (len_ % 2 == 0) phase_[i * nspec_ + nspec_ - 1] = std::cos(std::numbers::pi * shift / g.data.dt);
    }

    std::vector<double> re(len_);
    std::vector<std::complex<double>> sp(nspec_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c_.reset(fftw_plan_dft_r2c_1d(static_cast<int>(len_), re.data(),
                                    reinterpret_cast<fftw_complex*>(sp.data()), flags));
    c2r_.reset(fftw_plan_dft_c2r_1d(static_cast<int>(len_),
                                    reinterpret_cast<fftw_complex*>(sp.data()), re.data(), flags));
  }

  Trace forward(const Field& f) const {
    std::vector<double> buf(len_, 0.0);
    std::vector<std::complex<double>> spec(nspec_), acc(nspec_, 0.0);
    for (std::size_t i = 0; i < space_.m; ++i) {
      const auto row = f.row(i);
      std::copy(row.begin(), row.end(), buf.begin());
      std::fill(buf.begin() + static_cast<long>(nf_), buf.end(), 0.0);
      r2c(buf, spec);
      const auto* ph = &phase_[i * nspec_];
      for (std::size_t k = 0; k < nspec_; ++k) acc[k] += ph[k] * spec[k];
    }
    c2r(acc, buf);
    const double scale = amp_ * space_.dz / static_cast<double>(len_);
    std::vector<double> out(nd_);
    for (std::size_t j = 0; j < nd_; ++j) out[j] = scale * buf[offset_ + j];
    return Trace(data_, std::move(out));
  }

  Field adjoint(const Trace& e) const {
    std::vector<double> buf(len_, 0.0);
    const auto es = e.samples();
    std::copy(es.begin(), es.end(), buf.begin() + static_cast<long>(offset_));
    std::vector<std::complex<double>> spec(nspec_), tmp(nspec_);
    r2c(buf, spec);
    const double scale = amp_ / static_cast<double>(len_);
    std::vector<double> g(space_.m * nf_);
    for (std::size_t i = 0; i < space_.m; ++i) {
      const auto* ph = &phase_[i * nspec_];
      for (std::size_t k = 0; k < nspec_; ++k) tmp[k] = std::conj(ph[k]) * spec[k];
      c2r(tmp, buf);
      for (std::size_t k = 0; k < nf_; ++k) g[i * nf_ + k] = scale * buf[k];
    }
    return Field(space_, field_time_, std::move(g));
  }

private:
  void r2c(std::vector<double>& in, std::vector<std::complex<double>>& out) const {
    fftw_execute_dft_r2c(r2c_.get(), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  }
  // Destroys the contents of in.
  void c2r(std::vector<std::complex<double>>& in, std::vector<double>& out) const {
    fftw_execute_dft_c2r(c2r_.get(), reinterpret_cast<fftw_complex*>(in.data()), out.data());
  }

  SpaceGrid space_;
  TimeGrid field_time_;
  TimeGrid data_;
  std::size_t nf_, nd_, offset_;
  double amp_;
  std::size_t len_ = 0, nspec_ = 0;
  std::vector<std::complex<double>> phase_;
  Plan r2c_, c2r_;
};

void check_grids(const Geometry& geo, Velocity c, const OperatorGrids& g) {
  if (!(std::abs(g.field_time.dt - g.data.dt) <= 1e-12 * g.data.dt))
    throw DomainError("make_discrete_S: field and data time steps differ");
  const double lag = (g.data.t0 - g.field_time.t0) / g.data.dt;
  if (std::abs(lag - std::round(lag)) > 1e-6)
    throw DomainError("make_discrete_S: field and data time grids are not aligned");
  if (std::abs(g.field_time.last() - g.data.last()) > 1e-9 * g.data.dt * static_cast<double>(g.data.n))
    throw DomainError("make_discrete_S: field time grid must end with the data grid");
  const double reach = std::max(geo.z_r - geo.z_min, geo.z_max - geo.z_r) / c.value;
  if (g.field_time.t0 > g.data.t0 - reach + 1e-9)
    throw DomainError("make_discrete_S: field time grid starts too late for this velocity");
  const double lo = g.space.z0 - 0.5 * g.space.dz;
  const double hi = g.space.at(g.space.m - 1) + 0.5 * g.space.dz;
  const double tol = 1e-9 * geo.length();
  if (lo < geo.z_min - tol || hi > geo.z_max + tol)
    throw DomainError("make_discrete_S: space grid extends outside [z_min, z_max]");
}

} // namespace

LinearMap make_discrete_S(const Geometry& geo, Velocity c, const OperatorGrids& grids,
                          TimeInterp interp) {
  check_grids(geo, c, grids);
  if (interp == TimeInterp::bandlimited) {
    auto impl = std::make_shared<const BandlimitedS>(geo, c, grids);
    return LinearMap(
        grids.space, grids.field_time, grids.data,
        [impl](const Field& f) { return impl->forward(f); },
        [impl](const Trace& e) { return impl->adjoint(e); });
  }
  return LinearMap(
      grids.space, grids.field_time, grids.data,
      [geo, c, grids](const Field& f) { return forward_general(geo, c, f, grids.data); },
      [geo, c, grids](const Trace& e) {
        return adjoint_general(geo, c, e, grids.space, grids.field_time);
      });
}

double adjoint_test(const LinearMap& op, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("adjoint_test: need at least one trial");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const auto& sp = op.domain_space();
  const auto& ft = op.domain_time();
  const auto& rg = op.range();
  double worst = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    std::vector<double> xs(sp.m * ft.n), ys(rg.n);
    for (double& v : xs) v = uni(gen);
    for (double& v : ys) v = uni(gen);
    const Field x(sp, ft, std::move(xs));
    const Trace y(rg, std::move(ys));
    const Trace ax = op.apply(x);
    const Field aty = op.apply_adjoint(y);
    const double lhs = inner_product(ax, y);
    const double rhs = inner_product(x, aty);
    const double denom = ax.norm() * y.norm() + 1e-300;
    worst = std::max(worst, std::abs(lhs - rhs) / denom);
  }
  return worst;
}

CgReport cg_solve_dataspace(const LinearMap& op, double alpha, const Trace& rhs, double tol,
                            std::size_t maxiter) {
  if (!(alpha > 0.0)) throw DomainError("cg_solve_dataspace: alpha must be positive");
  if (!rhs.grid().matches(op.range()))
    throw DomainError("cg_solve_dataspace: rhs is not on the range grid");
  const TimeGrid grid = op.range();
  const std::size_t n = grid.n;
  if (maxiter == 0) maxiter = 10 * n;
  const double a2 = alpha * alpha;

  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
  };
  auto finite = [](double v) {
    if (!std::isfinite(v)) throw NumericalBreakdown("cg_solve_dataspace: non-finite value");
    return v;
  };

  std::vector<double> x(n, 0.0);
  std::vector<double> r(rhs.samples().begin(), rhs.samples().end());
  std::vector<double> p = r;
  double rr = finite(dot(r, r));
  const double bnorm = std::sqrt(rr);

  CgReport report{Trace(grid), 0, 0.0, false, {1.0}};
  if (bnorm == 0.0) {
    report.converged = true;
    report.residual_history = {0.0};
    return report;
  }

  double rel = 1.0;
  for (std::size_t it = 0; it < maxiter && rel > tol; ++it) {
    const Trace pt(grid, p);
    const Trace sstp = op.apply(op.apply_adjoint(pt));
    std::vector<double> q(sstp.samples().begin(), sstp.samples().end());
    for (std::size_t j = 0; j < n; ++j) q[j] += a2 * p[j];
    const double pq = finite(dot(p, q));
    if (!(pq > 0.0)) throw NumericalBreakdown("cg_solve_dataspace: operator not positive definite");
    const double step = rr / pq;
    for (std::size_t j = 0; j < n; ++j) {
      x[j] += step * p[j];
      r[j] -= step * q[j];
    }
    const double rr_new = finite(dot(r, r));
    rel = std::sqrt(rr_new) / bnorm;
    report.residual_history.push_back(rel);
    report.iterations = it + 1;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t j = 0; j < n; ++j) p[j] = r[j] + beta * p[j];
  }

  report.solution = Trace(grid, std::move(x));
  report.final_relative_residual = rel;
  report.converged = rel <= tol;
  return report;
}

} // namespace wrilab
