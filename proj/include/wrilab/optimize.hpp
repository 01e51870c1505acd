#pragma once

// Projected steepest descent on the scalar velocity, basin-of-attraction
// maps over many starts, and a golden-section line minimizer.

#include "wrilab/objectives.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace wrilab {

enum class BasinLabel { target, lower_bound, upper_bound, interior_spurious };
std::string to_string(BasinLabel label);

struct DescentOptions {
  double initial_step = 0.0;  // 0 selects (c_max - c_min) / 100
  double armijo = 1e-4;
  double backtrack = 0.5;
  double grad_tol = 1e-8;
  double step_tol = 1e-12;
  std::size_t max_iterations = 500;
  double fd_step = 0.0;  // 0 selects 1e-6 (c_max - c_min)
};

struct DescentReport {
  double c0 = 0.0;
  std::vector<double> history;  // iterates, starting with c0
  std::vector<double> values;   // objective along the history
  double c_final = 0.0;
  double final_gradient = 0.0;
  std::size_t iterations = 0;
  std::string termination;  // gradient, step, projected, max_iterations, error: ...
  BasinLabel label = BasinLabel::interior_spurious;
};

// Central-difference derivative, one-sided where c +- h leaves [c_min, c_max].
double fd_gradient(const Experiment& exp, const Objective& obj, double c, double h);

// target if |c - c_star| <= L lambda; else lower/upper_bound if within one
// scan cell ((c_max - c_min) / 2000) of a bound; else interior_spurious.
BasinLabel classify(const Experiment& exp, double c_final);

// Normalized projected steepest descent: each iteration tries a step of
// initial_step along -sign(g), clamped to [c_min, c_max], and halves it
// until the Armijo condition on the actual displacement holds.
DescentReport descend(const Experiment& exp, const Objective& obj, double c0,
                      const DescentOptions& opts = {});

std::vector<DescentReport> basin_map(const Experiment& exp, const Objective& obj,
                                     const std::vector<double>& starts,
                                     const DescentOptions& opts = {}, unsigned jobs = 1);

// Uniform start grid of n points on [c_min, c_max].
std::vector<double> start_grid(const Geometry& geo, std::size_t n);

// Golden-section search down to bracket width 1e-10.  A bracket narrower
// than that returns its midpoint.  Throws DomainError if the bracket is
// reversed or leaves [c_min, c_max].
double golden_section_min(const Experiment& exp, const Objective& obj,
                          std::pair<double, double> bracket, double tol = 1e-10);

} // namespace wrilab
