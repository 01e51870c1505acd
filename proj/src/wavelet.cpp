#include "wrilab/acoustics.hpp"
#include "wrilab/errors.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace wrilab {

namespace {

// Mother bump b(x) = exp(-1/(x(1-x))) on (0,1) and its first two derivatives.
// With s = x(1-x):  b' = b s'/s^2,  b'' = b (s'^2 - 2 s^2 - 2 s'^2 s) / s^4.
double bump0(double x) {
  if (!(x > 0.0 && x < 1.0)) return 0.0;
  return std::exp(-1.0 / (x * (1.0 - x)));
}

double bump1(double x) {
  const double b = bump0(x);
  if (b == 0.0) return 0.0;
  const double s = x * (1.0 - x);
  return b * (1.0 - 2.0 * x) / (s * s);
}

double bump2(double x) {
  const double b = bump0(x);
  if (b == 0.0) return 0.0;
  const double s = x * (1.0 - x);
  const double ds = 1.0 - 2.0 * x;
  const double s2 = s * s;
  return b * (ds * ds - 2.0 * s2 - 2.0 * ds * ds * s) / (s2 * s2);
}

// Trapezoid rule with 10^6 intervals; spectrally accurate for C_0^inf
// integrands.
template <class F>
double unit_interval_quadrature(F&& f) {
  constexpr int n = 1'000'000;
  const double h = 1.0 / n;
  double sum = 0.0;
  for (int k = 1; k < n; ++k) sum += f(k * h);
  return h * sum;  // endpoint values vanish
}

// Antiderivative of the bump, tabulated on a fine grid with an 8-point
// Gauss-Legendre rule per cell and evaluated by cubic Hermite interpolation
// using the exact derivative b at the nodes.
class BumpIntegralTable {
public:
  static const BumpIntegralTable& instance() {
    static const BumpIntegralTable table;
    return table;
  }

  double operator()(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return values_.back();
    const double u = x * cells;
    auto k = static_cast<std::size_t>(u);
    if (k >= cells) k = cells - 1;
    const double s = u - static_cast<double>(k);
    const double h = 1.0 / cells;
    const double y0 = values_[k], y1 = values_[k + 1];
    const double d0 = bump0(static_cast<double>(k) * h) * h;
    const double d1 = bump0(static_cast<double>(k + 1) * h) * h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * d1;
  }

  double total() const { return values_.back(); }

private:
  static constexpr std::size_t cells = 4096;

  BumpIntegralTable() : values_(cells + 1, 0.0) {
    static constexpr std::array<double, 8> node = {
        -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
        0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static constexpr std::array<double, 8> weight = {
        0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
        0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    const double h = 1.0 / cells;
    for (std::size_t k = 0; k < cells; ++k) {
      const double mid = (static_cast<double>(k) + 0.5) * h;
      double cell = 0.0;
      for (std::size_t q = 0; q < node.size(); ++q) cell += weight[q] * bump0(mid + 0.5 * h * node[q]);
      values_[k + 1] = values_[k] + 0.5 * h * cell;
    }
  }

  std::vector<double> values_;
};

double bump_norm_constant() {
  static const double n = 1.0 / std::sqrt(unit_interval_quadrature([](double x) {
    const double b = bump0(x);
    return b * b;
  }));
  return n;
}

double bump_derivative_norm_constant() {
  static const double n = 1.0 / std::sqrt(unit_interval_quadrature([](double x) {
    const double b = bump1(x);
    return b * b;
  }));
  return n;
}

} // namespace

std::string to_string(WaveletKind kind) {
  switch (kind) {
    case WaveletKind::bump: return "bump";
    case WaveletKind::bump_derivative: return "bump_derivative";
    case WaveletKind::tabulated: return "tabulated";
  }
  return "unknown";
}

WaveletKind wavelet_kind_from_string(const std::string& name) {
  if (name == "bump") return WaveletKind::bump;
  if (name == "bump_derivative") return WaveletKind::bump_derivative;
  if (name == "tabulated") return WaveletKind::tabulated;
  throw ConfigError("unknown wavelet kind '" + name + "'");
}

Wavelet::Wavelet(WaveletKind kind, double lambda, double norm)
    : kind_(kind), lambda_(lambda), norm_(norm) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("Wavelet: lambda must be positive");
}

Wavelet Wavelet::bump(double lambda) {
  return Wavelet(WaveletKind::bump, lambda, bump_norm_constant());
}

Wavelet Wavelet::bump_derivative(double lambda) {
  return Wavelet(WaveletKind::bump_derivative, lambda, bump_derivative_norm_constant());
}

Wavelet Wavelet::tabulated(const Trace& mother, double lambda) {
  const auto& g = mother.grid();
  if (g.t0 < 0.0 || g.last() > 1.0 + 1e-12)
    throw DomainError("Wavelet::tabulated: mother samples must lie in [0, 1]");
  const double energy = inner_product(mother, mother);
  if (!(energy > 0.0)) throw DomainError("Wavelet::tabulated: zero mother wavelet");
  Wavelet w(WaveletKind::tabulated, lambda, 1.0 / std::sqrt(energy));
  w.table_ = std::make_shared<const Trace>(mother);
  w.table_integral_ = std::make_shared<const Trace>(cumulative_integral(mother));
  return w;
}

Wavelet Wavelet::of_kind(WaveletKind kind, double lambda) {
  switch (kind) {
    case WaveletKind::bump: return bump(lambda);
    case WaveletKind::bump_derivative: return bump_derivative(lambda);
    case WaveletKind::tabulated: break;
  }
  throw ConfigError("tabulated wavelets need sample data");
}

Wavelet Wavelet::rescaled(double lambda) const {
  Wavelet w(*this);
  if (!(lambda > 0.0)) throw DomainError("Wavelet: lambda must be positive");
  w.lambda_ = lambda;
  return w;
}

bool Wavelet::supports(WaveletMode mode) const {
  return !(kind_ == WaveletKind::tabulated && mode == WaveletMode::derivative);
}

double Wavelet::eval(double t, WaveletMode mode) const {
  if (!supports(mode)) throw UnsupportedMode("tabulated wavelet has no derivative mode");
  const double x = t / lambda_;
  const double sq = std::sqrt(lambda_);
  switch (mode) {
    case WaveletMode::value: {
      if (x <= 0.0 || x >= 1.0) return 0.0;
      double m = 0.0;
      switch (kind_) {
        case WaveletKind::bump: m = bump0(x); break;
        case WaveletKind::bump_derivative: m = bump1(x); break;
        case WaveletKind::tabulated: m = eval_interp(*table_, x); break;
      }
      return norm_ * m / sq;
    }
    case WaveletMode::derivative: {
      if (x <= 0.0 || x >= 1.0) return 0.0;
      const double m = kind_ == WaveletKind::bump ? bump1(x) : bump2(x);
      return norm_ * m / (lambda_ * sq);
    }
    case WaveletMode::antiderivative: {
      if (x <= 0.0) return 0.0;
      double m = 0.0;
      switch (kind_) {
        case WaveletKind::bump: m = BumpIntegralTable::instance()(x); break;
        case WaveletKind::bump_derivative: m = bump0(x); break;
        case WaveletKind::tabulated:
          m = x >= table_integral_->grid().last()
                  ? (*table_integral_)[table_integral_->size() - 1]
                  : eval_interp(*table_integral_, x);
          break;
      }
      return norm_ * sq * m;
    }
  }
  return 0.0;
}

} // namespace wrilab
