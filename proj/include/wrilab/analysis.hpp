#pragma once

// Landscape scans over c, far-region minimizer checks for the FWI and WRI
// objectives, support-separation predicates and the derivative blow-up
// diagnostic.

#include "wrilab/acoustics.hpp"
#include "wrilab/objectives.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace wrilab {

// lambda_0 = T - |z_s - z_r| / c_min: largest lambda for which every
// predicted pulse fits inside (0, T).
double lambda_admissible_max(const Geometry& geo);

// L = 2 c_max^2 / |z_s - z_r|.  |c - c_star| > L lambda guarantees that the
// predicted and observed pulses have disjoint supports.
double separation_scale(const Geometry& geo);

struct SupportSeparation {
  bool disjoint = false;    // |tau(c) - tau(c_star)| > lambda
  bool sufficient = false;  // |c - c_star| > L lambda
};
// Throws DomainError unless lambda < lambda_0.
SupportSeparation supports_disjoint(const Geometry& geo, Velocity c, Velocity c_star,
                                    double lambda);

// Problem family indexed by lambda, with the data grid tied to lambda.
struct ProblemSetup {
  Geometry geo;
  Velocity c_star{1.0};
  WaveletKind wavelet = WaveletKind::bump;
  double samples_per_lambda = 40.0;

  Experiment make(double lambda) const;
};

// Uniform c grid; points == 1 selects {c_lo}.
struct ScanSpec {
  double c_lo = 0.5;
  double c_hi = 2.0;
  std::size_t points = 2001;

  static ScanSpec full(const Geometry& geo, std::size_t points = 2001);
  std::vector<double> values() const;
  double cell() const;  // grid spacing, 0 for a single point
};

struct ScanResult {
  std::vector<double> c_values;
  std::vector<std::string> names;             // one per objective
  std::vector<std::vector<double>> columns;   // columns[k][i] = objective k at c_values[i]
  double lambda = 0.0;
};

// Evaluates every objective at every grid point, parallel over c with
// results assembled in index order.
ScanResult scan_landscape(const Experiment& exp, const std::vector<Objective>& objectives,
                          const ScanSpec& spec, unsigned jobs = 1);

// Indices of interior local minima of a sampled function.  A run of equal
// values bounded by larger values on both sides counts once (its midpoint).
std::vector<std::size_t> local_minima(const std::vector<double>& values);

// beta = (z_max - z_min) / c_star^2 - 4 alpha^2.
double beta_parameter(const Geometry& geo, Velocity c_star, double alpha);

enum class TheoremStatus { pass, fail, not_applicable };
std::string to_string(TheoremStatus s);

struct TheoremReport {
  int theorem = 1;
  double lambda = 0.0;
  double alpha = 0.0;  // 0 for the FWI theorem
  double L = 0.0;
  double lambda0 = 0.0;
  double beta = 0.0;
  double predicted = 0.0;  // predicted far-region minimizer (NaN when flat)
  double computed = 0.0;   // far-region argmin on the scan
  double tolerance = 0.0;  // one scan cell
  double flat_variation = 0.0;  // (max - min) / max over the far region
  bool monotone = false;        // far-region values monotone in the predicted direction
  std::size_t far_points = 0;
  TheoremStatus status = TheoremStatus::not_applicable;
  std::string note;
};

// FWI: far-region argmin = c_max, and far-region values strictly decrease
// in c.
TheoremReport theorem1_verify(const Experiment& exp, const ScanSpec& spec, unsigned jobs = 1);

// WRI (closed form): far-region argmin = c_min if beta > 0, c_max if
// beta < 0; relative variation <= 1e-9 if beta = 0.  Also checks the
// direction of monotonicity against sign(beta).
TheoremReport theorem2_verify(const Experiment& exp, double alpha, const ScanSpec& spec,
                              unsigned jobs = 1);

struct AlphaSweepReport {
  std::vector<double> alphas;
  std::vector<double> argmins;
  std::vector<double> far_values;  // WRI value at the far-region argmin
  bool far_region_identical = false;
  bool all_at_c_min = false;
  bool pass = false;
};

// Requires beta > 0 for every alpha (DomainError otherwise).
AlphaSweepReport alpha_sweep_argmin(const Experiment& exp, const std::vector<double>& alphas,
                                    const ScanSpec& spec, unsigned jobs = 1);

struct NonsmoothnessReport {
  std::vector<double> lambdas;
  std::vector<double> max_gradient;  // max_c |dJ/dc| per lambda
  std::vector<double> argmax_c;
  double slope = 0.0;            // least-squares slope of log max_gradient vs log lambda
  double variation_ratio = 0.0;  // max / min of max_gradient over the sweep
};

// For each lambda: c grid of step lambda/10 over [c_min, c_max], central
// differences with h = 1e-6 (c_max - c_min) (one-sided at the bounds).
// Throws DomainError for fewer than 3 lambdas or any lambda >= lambda_0.
NonsmoothnessReport nonsmoothness_diagnostic(const ProblemSetup& setup,
                                             const std::vector<double>& lambdas,
                                             const Objective& obj, unsigned jobs = 1);

} // namespace wrilab
