// FWI, WRI (both routes), the weight operator, annihilator objectives, the
// quadratic-form rewrite and gradients.

#include "wrilab/analysis.hpp"
#include "wrilab/errors.hpp"
#include "wrilab/objectives.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wrilab;

namespace {

const Geometry kGeo = cfg0_geometry();

Experiment cfg0_experiment(double lambda = 0.02, WaveletKind kind = WaveletKind::bump) {
  return Experiment::consistent(kGeo, Velocity(1.0), Wavelet::of_kind(kind, lambda), lambda / 40);
}

WriConfig wri(double alpha, WriRoute route) {
  WriConfig cfg;
  cfg.alpha = alpha;
  cfg.route = route;
  return cfg;
}

template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

// ---------------------------------------------------------------- FWI

TEST(FwiValue, VanishesAtTarget) {
  EXPECT_LE(fwi_value(cfg0_experiment(), Velocity(1.0)).value, 1e-12);
}

TEST(FwiValue, FarRegionValueAtUpperBound) {
  EXPECT_NEAR(fwi_value(cfg0_experiment(), Velocity(2.0)).value, 0.15625, 0.005 * 0.15625);
}

TEST(FwiValue, IndependentOfRecordLengthOnceSupportsFit) {
  const Experiment a = cfg0_experiment();
  Geometry longer = kGeo;
  longer.T = 3.0;
  const Experiment b = Experiment::consistent(longer, Velocity(1.0), a.wavelet, 0.0005);
  for (double c : {0.5, 0.97, 1.3, 2.0})
    EXPECT_NEAR(fwi_value(a, Velocity(c)).value, fwi_value(b, Velocity(c)).value,
                1e-12 * fwi_value(a, Velocity(c)).value + 1e-15);
}

TEST(FwiValue, RejectsInadmissibleVelocity) {
  EXPECT_THROW(fwi_value(cfg0_experiment(), Velocity(0.49)), DomainError);
  EXPECT_THROW(fwi_value(cfg0_experiment(), Velocity(2.01)), DomainError);
}

TEST(FwiPlateau, ArithmeticValues) {
  const Experiment exp = cfg0_experiment();
  EXPECT_DOUBLE_EQ(fwi_plateau(exp, Velocity(2.0)), 0.15625);
  EXPECT_DOUBLE_EQ(fwi_plateau(exp, Velocity(0.5)), 0.625);
}

TEST(FwiPlateau, MatchesQuadratureAcrossFarRegion) {
  for (double lambda : {0.02, 0.01}) {
    const Experiment exp = cfg0_experiment(lambda);
    const double edge = separation_scale(kGeo) * lambda;
    for (int i = 0; i <= 150; ++i) {
      const double c = kGeo.c_min + 0.01 * i;
      if (std::abs(c - 1.0) <= edge) continue;
      EXPECT_LE(rel(fwi_value(exp, Velocity(c)).value, fwi_plateau(exp, Velocity(c))), 0.005) << "c " << c;
    }
  }
}

TEST(FwiPlateau, RejectsNearRegion) {
  const Experiment exp = cfg0_experiment();
  EXPECT_THROW(fwi_plateau(exp, Velocity(1.3)), DomainError);  // L lambda = 0.32
  EXPECT_NO_THROW(fwi_plateau(exp, Velocity(1.33)));
}

// ---------------------------------------------------------------- WRI

TEST(WriValue, VanishesAtTarget) {
  const Experiment exp = cfg0_experiment();
  for (auto route : {WriRoute::closed_form, WriRoute::variational})
    EXPECT_LE(wri_value(exp, Velocity(1.0), wri(0.25, route)).value, 1e-12);
}

TEST(WriValue, ClosedFormAtUpperBound) {
  const Experiment exp = cfg0_experiment();
  const ObjectiveValue cf = wri_value(exp, Velocity(2.0), wri(0.25, WriRoute::closed_form));
  // k(2) = 1/16 = alpha^2, so the multiplier alpha^2 / (k + alpha^2) is 1/2.
  EXPECT_DOUBLE_EQ(normal_constant(kGeo, Velocity(2.0)), 0.0625);
  EXPECT_NEAR(cf.value, 0.5 * fwi_value(exp, Velocity(2.0)).value, 1e-15);
  EXPECT_NEAR(cf.value, 0.078125, 0.005 * 0.078125);
  EXPECT_EQ(cf.route, "closed_form");
  EXPECT_NEAR(cf.half_weight_value, 0.5 * cf.value, 1e-15);
}

TEST(WriValue, VariationalRouteAgreesWithClosedForm) {
  const Experiment exp = cfg0_experiment();
  for (double c : {0.6, 2.0}) {
    for (double alpha : {0.25, 0.6}) {
      const ObjectiveValue v = wri_value(exp, Velocity(c), wri(alpha, WriRoute::variational));
      const ObjectiveValue f = wri_value(exp, Velocity(c), wri(alpha, WriRoute::closed_form));
      EXPECT_TRUE(v.cg_converged);
      EXPECT_EQ(v.route, "variational");
      EXPECT_LE(rel(v.value, f.value), 1e-6) << "c " << c << " alpha " << alpha;
      // The two terms of the penalty functional recombine to the value.
      EXPECT_LE(rel(v.misfit_term + v.penalty_term, v.value), 1e-6);
      EXPECT_NEAR(v.recombined, v.misfit_term + v.penalty_term, 1e-15);
    }
  }
}

TEST(WriValue, RatioToFwiIsDataIndependent) {
  // Inconsistent data: two events, neither generated by a single velocity.
  const Wavelet w = Wavelet::bump(0.02);
  const TimeGrid g = data_grid(kGeo, 0.0005);
  const Trace d = 0.7 * point_forward(kGeo, Velocity(1.3), w, g) + 0.2 * point_forward(kGeo, Velocity(0.8), w, g);
  const Experiment exp{kGeo, Velocity(1.0), w, d};
  for (double c : {0.6, 1.5}) {
    const double k = normal_constant(kGeo, Velocity(c));
    const double alpha = 0.5;
    const double v = wri_value(exp, Velocity(c), wri(alpha, WriRoute::variational)).value;
    EXPECT_LE(rel(v, alpha * alpha / (k + alpha * alpha) * fwi_value(exp, Velocity(c)).value), 1e-6);
  }
}

TEST(WriValue, IncreasingInAlphaAndVanishingAsAlphaShrinks) {
  const Experiment exp = cfg0_experiment();
  for (double c : {0.7, 1.6}) {
    double prev = 0.0;
    for (double alpha : {0.01, 0.1, 0.25, 0.5, 1.0}) {
      const double v = wri_value(exp, Velocity(c), wri(alpha, WriRoute::closed_form)).value;
      EXPECT_GT(v, prev);
      EXPECT_GE(v, 0.0);
      prev = v;
    }
    EXPECT_LT(wri_value(exp, Velocity(c), wri(1e-4, WriRoute::closed_form)).value, 1e-6);
  }
}

TEST(WriConfig, RejectsBadSettings) {
  EXPECT_THROW(wri(0.0, WriRoute::closed_form).validate(), ConfigError);
  WriConfig cfg;
  cfg.cg_tol = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(wri_value(cfg0_experiment(), Velocity(1.5), wri(-1.0, WriRoute::closed_form)), ConfigError);
}

// ---------------------------------------------------------------- weight operator

TEST(WeightApply, ScalarMultiplier) {
  EXPECT_NEAR(weight_multiplier(kGeo, Velocity(1.0), 0.25), 0.1, 1e-15);
}

TEST(WeightApply, ZeroResidual) {
  const Experiment exp = cfg0_experiment();
  const Trace zero(exp.data.grid());
  EXPECT_EQ(weight_apply(exp, Velocity(1.0), 0.25, zero, WeightPath::scalar).norm(), 0.0);
  EXPECT_EQ(weight_apply(exp, Velocity(1.0), 0.25, zero, WeightPath::cg).norm(), 0.0);
}

TEST(WeightApply, CgMatchesScalarPath) {
  const Experiment exp = cfg0_experiment();
  for (double c : {0.5, 1.0, 2.0}) {
    const Trace r = residual(exp, Velocity(c == 1.0 ? 1.4 : c));
    const Trace a = weight_apply(exp, Velocity(c), 0.25, r, WeightPath::cg);
    const Trace b = weight_apply(exp, Velocity(c), 0.25, r, WeightPath::scalar);
    EXPECT_LE((a - b).norm() / b.norm(), 1e-6) << "c " << c;
  }
}

TEST(WeightApply, RejectsNonPositiveAlpha) {
  const Experiment exp = cfg0_experiment();
  EXPECT_THROW(weight_apply(exp, Velocity(1.0), 0.0, exp.data, WeightPath::scalar), DomainError);
}

// ---------------------------------------------------------------- annihilator

TEST(Annihilator, SmallAtTarget) {
  for (double lambda : {0.04, 0.02, 0.01}) {
    const Experiment exp = cfg0_experiment(lambda);
    const Velocity c(1.0);
    // ||u||^2 with u = (1/2c) d(t + tau) = w / (4 c^2): ||u||^2 = 1/16.
    const double unorm2 = 1.0 / 16.0;
    EXPECT_LE(annihilator_value(exp, c, AnnihilatorVariant::squared), lambda * lambda * unorm2 * (1 + 1e-9));
    EXPECT_LE(annihilator_value(exp, c, AnnihilatorVariant::normalized), lambda * lambda);
  }
}

TEST(Annihilator, NormalizedMatchesQuadratureOracleAtUpperBound) {
  const double lambda = 0.02;
  const Experiment exp = cfg0_experiment(lambda);
  // u(t) is proportional to w(t - s) with s = tau(c_star) - tau(2) = 0.25.
  const Wavelet& w = exp.wavelet;
  const double s = 0.25;
  const double num = simpson([&](double t) { return t * t * w(t - s) * w(t - s); }, s, s + lambda, 20000);
  const double den = simpson([&](double t) { return w(t - s) * w(t - s); }, s, s + lambda, 20000);
  const double value = annihilator_value(exp, Velocity(2.0), AnnihilatorVariant::normalized);
  EXPECT_LE(rel(value, num / den), 1e-4);
  // Mean-square arrival time: the 0.25 offset plus the pulse centroid lambda/2.
  EXPECT_LE(rel(value, (s + lambda / 2) * (s + lambda / 2)), 0.01);
}

TEST(Annihilator, NormalizedBoundedBelowAwayFromTarget) {
  const double lambda = 0.02;
  const Experiment exp = cfg0_experiment(lambda);
  const double tau_star = transit_time(kGeo, Velocity(1.0));
  for (int i = 0; i <= 30; ++i) {
    const double c = 0.5 + 0.05 * i;
    const double gap = std::abs(transit_time(kGeo, Velocity(c)) - tau_star) - lambda;
    if (gap <= 0.0) continue;
    const double v = annihilator_value(exp, Velocity(c), AnnihilatorVariant::normalized);
    EXPECT_GE(v, gap * gap) << "c " << c;
  }
}

TEST(Annihilator, SignedAndSquaredVariantsAreConsistent) {
  const Experiment exp = cfg0_experiment();
  for (double c : {0.8, 1.0, 1.7}) {
    const double sq = annihilator_value(exp, Velocity(c), AnnihilatorVariant::squared);
    const double norm = annihilator_value(exp, Velocity(c), AnnihilatorVariant::normalized);
    // u = w(t - s) / (4c) with ||w|| = 1 and s = tau(c_star) - tau(c), so
    // int t^2 u^2 = normalized * ||u||^2 and int t u^2 has the sign of
    // the mean arrival s + lambda/2.
    const double u2 = 1.0 / (16.0 * c * c);
    EXPECT_LE(rel(sq, norm * u2), 1e-9) << "c " << c;
    const double s = transit_time(kGeo, Velocity(1.0)) - transit_time(kGeo, Velocity(c));
    const double signed_value = annihilator_value(exp, Velocity(c), AnnihilatorVariant::signed_moment);
    EXPECT_LE(std::abs(signed_value - (s + 0.01) * u2), 1e-6 * u2) << "c " << c;
  }
}

TEST(Annihilator, NormalizedRejectsZeroData) {
  const Experiment base = cfg0_experiment();
  const Experiment silent{kGeo, Velocity(1.0), base.wavelet, Trace(base.data.grid())};
  EXPECT_THROW(annihilator_value(silent, Velocity(1.0), AnnihilatorVariant::normalized), DomainError);
  EXPECT_EQ(annihilator_value(silent, Velocity(1.0), AnnihilatorVariant::squared), 0.0);
}

// ---------------------------------------------------------------- quadratic form

TEST(QuadraticForm, IdentityAtTarget) {
  const QuadraticFormReport q = quadratic_form_checks(cfg0_experiment(), Velocity(1.0));
  EXPECT_LE(q.reconstruction_residual, 1e-12);
  EXPECT_LE(q.expansion_residual, 1e-12);
  EXPECT_LE(q.cross_term_residual, 1e-12);
  EXPECT_LE(q.direct, 1e-12);
}

TEST(QuadraticForm, RewriteReproducesFwiValue) {
  const Experiment exp = cfg0_experiment();
  for (double c : {0.6, 0.99, 1.2, 1.9}) {
    const QuadraticFormReport q = quadratic_form_checks(exp, Velocity(c));
    EXPECT_LE(q.reconstruction_residual, 1e-8) << "c " << c;
    EXPECT_LE(q.expansion_residual, 1e-8) << "c " << c;
    EXPECT_LE(q.cross_term_residual, 1e-8) << "c " << c;
    EXPECT_NEAR(q.expansion_minus, q.constant_term + q.smooth_term - q.cross_term, 1e-15);
  }
}

TEST(QuadraticForm, PlusSignDoesNotReproduceValueNearTarget) {
  const QuadraticFormReport q = quadratic_form_checks(cfg0_experiment(), Velocity(1.0));
  // Identical pulses: cross term = ||d||^2 = 1/4, so the plus sign gives 1/2.
  EXPECT_NEAR(q.plus_sign_residual, 0.5, 1e-3);
}

TEST(QuadraticForm, RejectsPulsesOutsideWindow) {
  Geometry g = kGeo;
  g.T = 1.05;
  const Experiment exp = Experiment::consistent(g, Velocity(1.0), Wavelet::bump(0.1), 0.0025);
  EXPECT_THROW(quadratic_form_checks(exp, Velocity(0.5)), DomainError);
  EXPECT_NO_THROW(quadratic_form_checks(exp, Velocity(1.0)));
}

// ---------------------------------------------------------------- gradients

TEST(Gradient, FarRegionDerivative) {
  const Experiment exp = cfg0_experiment();
  const Objective fwi = Objective::fwi();
  EXPECT_NEAR(gradient(exp, Velocity(2.0), fwi, GradientMethod::analytic_fwi), -0.03125, 0.01 * 0.03125);
  const double c = 1.8;
  EXPECT_NEAR(gradient(exp, Velocity(c), fwi, GradientMethod::central_fd), -1.0 / (4 * c * c * c),
              0.01 / (4 * c * c * c));
}

TEST(Gradient, AnalyticMatchesFiniteDifferences) {
  for (auto kind : {WaveletKind::bump, WaveletKind::bump_derivative}) {
    const Experiment exp = cfg0_experiment(0.02, kind);
    for (double c : {0.995, 1.004, 1.01, 0.7, 1.6}) {
      const double a = gradient(exp, Velocity(c), Objective::fwi(), GradientMethod::analytic_fwi);
      const double f = gradient(exp, Velocity(c), Objective::fwi(), GradientMethod::central_fd, 1e-5);
      EXPECT_LE(std::abs(a - f), 1e-5 * std::abs(f)) << to_string(kind) << " c " << c;
    }
  }
}

TEST(Gradient, StationaryAtTarget) {
  EXPECT_LE(std::abs(gradient(cfg0_experiment(), Velocity(1.0), Objective::fwi(), GradientMethod::analytic_fwi)),
            1e-8);
}

TEST(Gradient, RejectsUnsupportedRequests) {
  const Experiment exp = cfg0_experiment();
  EXPECT_THROW(gradient(exp, Velocity(1.5), Objective::fwi(), GradientMethod::central_fd, 0.0), DomainError);
  EXPECT_THROW(gradient(exp, Velocity(2.0), Objective::fwi(), GradientMethod::central_fd), DomainError);
  EXPECT_THROW(gradient(exp, Velocity(1.5), Objective::wri_closed_form(0.25), GradientMethod::analytic_fwi),
               DomainError);
  const TimeGrid g(0.0, 0.01, 101);
  const Wavelet tab = Wavelet::tabulated(Trace::sample(g, [](double x) { return x * (1 - x); }), 0.02);
  const Experiment texp = Experiment::consistent(kGeo, Velocity(1.0), tab, 0.0005);
  EXPECT_THROW(gradient(texp, Velocity(1.5), Objective::fwi(), GradientMethod::analytic_fwi), UnsupportedMode);
}

// ---------------------------------------------------------------- dispatch

TEST(Objective, LabelsAndDispatch) {
  const Experiment exp = cfg0_experiment();
  EXPECT_EQ(Objective::fwi().label(), "fwi");
  EXPECT_EQ(Objective::wri_closed_form(0.25).label(), "wri_a0.25");
  EXPECT_EQ(Objective::annihilator(AnnihilatorVariant::normalized).label(), "ann_normalized");
  const Velocity c(1.7);
  EXPECT_EQ(evaluate(exp, c, Objective::fwi()), fwi_value(exp, c).value);
  EXPECT_EQ(evaluate(exp, c, Objective::wri_closed_form(0.5)),
            wri_value(exp, c, wri(0.5, WriRoute::closed_form)).value);
  EXPECT_EQ(evaluate(exp, c, Objective::annihilator(AnnihilatorVariant::squared)),
            annihilator_value(exp, c, AnnihilatorVariant::squared));
}
