#include "wrilab/commands.hpp"
#include "wrilab/analysis.hpp"
#include "wrilab/errors.hpp"
#include "wrilab/linear_ops.hpp"
#include "wrilab/objectives.hpp"
#include "wrilab/optimize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wrilab {

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvTable::text() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

namespace {

std::string write_table(const RunConfig& cfg, const std::string& name, const CsvTable& table) {
  const std::filesystem::path dir(cfg.outdir);
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << table.text();
  if (!f) throw std::runtime_error("error writing " + path.string());
  return path.string();
}

Experiment experiment_of(const RunConfig& cfg, double lambda) {
  return Experiment::consistent(cfg.geo, Velocity(cfg.c_star), Wavelet::of_kind(cfg.wavelet, lambda),
                                cfg.dt_for(lambda));
}

double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

} // namespace

std::vector<VerifyCheck> verify_checks(const RunConfig& cfg, unsigned jobs) {
  (void)jobs;
  cfg.validate();
  const Geometry& geo = cfg.geo;
  const double lambda = cfg.primary_lambda();
  const Experiment exp = experiment_of(cfg, lambda);
  const OperatorGrids grids = make_operator_grids(geo, cfg.dz, cfg.dt_for(lambda));
  const Velocity c_star(cfg.c_star);
  std::vector<VerifyCheck> out;
  auto add = [&](std::string name, double measured, double tol) {
    out.push_back({std::move(name), measured, tol, std::isfinite(measured) && measured <= tol});
  };

  const double velocities[] = {geo.c_min, cfg.c_star, geo.c_max};
  for (double c : velocities) {
    const LinearMap S = make_discrete_S(geo, Velocity(c), grids);
    add("adjoint_c" + tag(c), adjoint_test(S, 10, cfg.seed), 1e-12);
  }

  {
    // Smooth trace supported strictly inside (0, T).
    const double a = 0.2 * geo.T, b = 0.8 * geo.T;
    const Trace e = Trace::sample(grids.data, [&](double t) {
      if (t <= a || t >= b) return 0.0;
      const double x = (t - a) / (b - a);
      return std::exp(-1.0 / (x * (1.0 - x)));
    });
    for (double c : velocities) {
      const LinearMap S = make_discrete_S(geo, Velocity(c), grids);
      const double k = normal_constant(geo, Velocity(c));
      add("normal_operator_c" + tag(c), (S.apply(S.apply_adjoint(e)) - k * e).norm() / (k * e.norm()),
          0.02);
    }
  }

  for (double c : velocities) {
    const Trace p = point_forward(geo, Velocity(c), exp.wavelet, grids.data);
    const double k = 1.0 / (4.0 * c * c);
    add("trace_norm_c" + tag(c), std::abs(inner_product(p, p) - k) / k, 1e-3);
  }

  {
    const Field E = extension_source(geo, c_star, exp.wavelet, cfg.eps, grids.space, grids.field_time);
    const Trace se = forward_general(geo, c_star, E, grids.data);
    const Trace sp = point_forward(geo, c_star, exp.wavelet, grids.data);
    add("extension_identity_c" + tag(cfg.c_star), (se - sp).norm() / sp.norm(), 0.02);
  }

  {
    const double radius = separation_scale(geo) * lambda;
    if (std::abs(geo.c_max - cfg.c_star) > radius)
      add("plateau_c" + tag(geo.c_max),
          relative(fwi_value(exp, Velocity(geo.c_max)).value, fwi_plateau(exp, Velocity(geo.c_max))),
          5e-3);
  }

  for (double alpha : cfg.alphas) {
    for (double c : {geo.c_max, 0.5 * (geo.c_min + cfg.c_star)}) {
      WriConfig wc;
      wc.alpha = alpha;
      wc.dz = cfg.dz;
      wc.route = WriRoute::variational;
      const ObjectiveValue v = wri_value(exp, Velocity(c), wc);
      wc.route = WriRoute::closed_form;
      const ObjectiveValue f = wri_value(exp, Velocity(c), wc);
      const std::string suffix = "_c" + tag(c) + "_a" + tag(alpha);
      add("wri_routes" + suffix, relative(v.value, f.value), 1e-6);
      add("wri_recombination" + suffix, relative(v.recombined, v.value), 1e-6);
    }
  }

  {
    const double alpha = cfg.alphas.front();
    const Trace r = residual(exp, Velocity(geo.c_max));
    const Trace cg = weight_apply(exp, c_star, alpha, r, WeightPath::cg, cfg.dz);
    const Trace sc = weight_apply(exp, c_star, alpha, r, WeightPath::scalar);
    add("weight_paths_a" + tag(alpha), (cg - sc).norm() / sc.norm(), 1e-6);
  }

  for (double c : {0.8 * cfg.c_star, cfg.c_star, 1.2 * cfg.c_star}) {
    if (!geo.admissible(Velocity(c))) continue;
    const QuadraticFormReport q = quadratic_form_checks(exp, Velocity(c));
    add("quadratic_form_reconstruction_c" + tag(c), q.reconstruction_residual, 1e-8);
    add("quadratic_form_expansion_c" + tag(c), q.expansion_residual, 1e-8);
    add("quadratic_form_cross_term_c" + tag(c), q.cross_term_residual, 1e-8);
  }
  return out;
}

CommandResult cmd_verify(const RunConfig& cfg, unsigned jobs) {
  const auto checks = verify_checks(cfg, jobs);
  CommandResult res;
  res.table.header = {"check", "measured", "tolerance", "pass"};
  std::ostringstream summary;
  bool all = true;
  for (const auto& c : checks) {
    res.table.rows.push_back(
        {c.name, csv_number(c.measured), csv_number(c.tolerance), c.pass ? "true" : "false"});
    summary << (c.pass ? "PASS " : "FAIL ") << c.name << " measured=" << csv_number(c.measured)
            << " tolerance=" << csv_number(c.tolerance) << "\n";
    all = all && c.pass;
  }
  res.path = write_table(cfg, "verify.csv", res.table);
  res.summary = summary.str();
  res.exit_code = all ? 0 : 1;
  return res;
}

CommandResult cmd_scan(const RunConfig& cfg, unsigned jobs) {
  cfg.validate();
  const Experiment exp = experiment_of(cfg, cfg.primary_lambda());
  std::vector<Objective> objs{Objective::fwi()};
  for (double a : cfg.alphas) objs.push_back(Objective::wri_closed_form(a));
  objs.push_back(Objective::annihilator(AnnihilatorVariant::signed_moment));
  objs.push_back(Objective::annihilator(AnnihilatorVariant::squared));
  objs.push_back(Objective::annihilator(AnnihilatorVariant::normalized));
  const ScanResult scan = scan_landscape(exp, objs, ScanSpec::full(cfg.geo, cfg.scan_points), jobs);

  CommandResult res;
  res.table.header = {"c", "J_fwi"};
  for (double a : cfg.alphas) res.table.header.push_back("J_wri_a" + tag(a));
  res.table.header.insert(res.table.header.end(), {"J_ann_signed", "J_ann_squared", "J_ann_norm"});
  for (std::size_t i = 0; i < scan.c_values.size(); ++i) {
    std::vector<std::string> row{csv_number(scan.c_values[i])};
    for (const auto& col : scan.columns) row.push_back(csv_number(col[i]));
    res.table.rows.push_back(std::move(row));
  }
  res.path = write_table(cfg, "scan.csv", res.table);
  std::ostringstream summary;
  summary << "scan: " << scan.c_values.size() << " points, lambda = " << csv_number(scan.lambda)
          << "\n";
  for (std::size_t k = 0; k < scan.columns.size(); ++k) {
    const auto& col = scan.columns[k];
    const auto it = std::min_element(col.begin(), col.end());
    summary << "  " << scan.names[k] << ": global argmin c = "
            << csv_number(scan.c_values[static_cast<std::size_t>(it - col.begin())]) << "\n";
  }
  res.summary = summary.str();
  return res;
}

CommandResult cmd_theorems(const RunConfig& cfg, unsigned jobs) {
  cfg.validate();
  CommandResult res;
  res.table.header = {"theorem", "lambda", "alpha", "L", "lambda0", "beta",
                      "predicted", "computed", "status", "note"};
  std::ostringstream summary;
  bool all = true;
  auto emit = [&](const TheoremReport& r) {
    const bool applicable = r.status != TheoremStatus::not_applicable;
    const std::string predicted = std::isnan(r.predicted) ? "any" : csv_number(r.predicted);
    res.table.rows.push_back({std::to_string(r.theorem), csv_number(r.lambda),
                              r.theorem == 1 ? "" : csv_number(r.alpha), csv_number(r.L),
                              csv_number(r.lambda0), r.theorem == 1 ? "" : csv_number(r.beta),
                              predicted, applicable ? csv_number(r.computed) : "",
                              to_string(r.status), r.note});
    summary << "theorem " << r.theorem << " lambda=" << csv_number(r.lambda);
    if (r.theorem == 2) summary << " alpha=" << csv_number(r.alpha);
    summary << ": " << to_string(r.status) << " (predicted " << predicted << ", computed "
            << (applicable ? csv_number(r.computed) : "-") << "; " << r.note << ")\n";
    if (r.status == TheoremStatus::fail) all = false;
  };
  const ScanSpec spec = ScanSpec::full(cfg.geo, cfg.scan_points);
  for (double lambda : cfg.lambdas) {
    const Experiment exp = experiment_of(cfg, lambda);
    emit(theorem1_verify(exp, spec, jobs));
    for (double a : cfg.alphas) emit(theorem2_verify(exp, a, spec, jobs));
  }
  res.path = write_table(cfg, "theorems.csv", res.table);
  res.summary = summary.str();
  res.exit_code = all ? 0 : 1;
  return res;
}

CommandResult cmd_basins(const RunConfig& cfg, unsigned jobs) {
  cfg.validate();
  const Experiment exp = experiment_of(cfg, cfg.primary_lambda());
  const std::vector<double> starts = start_grid(cfg.geo, cfg.basin_starts);
  std::vector<Objective> objs{Objective::fwi()};
  for (double a : cfg.alphas) objs.push_back(Objective::wri_closed_form(a));

  CommandResult res;
  res.table.header = {"objective", "c0", "c_final", "label", "iterations", "final_grad"};
  std::ostringstream summary;
  for (const auto& obj : objs) {
    const auto reports = basin_map(exp, obj, starts, {}, jobs);
    std::size_t counts[4] = {0, 0, 0, 0};
    for (const auto& r : reports) {
      res.table.rows.push_back({obj.label(), csv_number(r.c0), csv_number(r.c_final),
                                to_string(r.label), std::to_string(r.iterations),
                                csv_number(r.final_gradient)});
      ++counts[static_cast<int>(r.label)];
    }
    summary << obj.label() << ": target " << counts[0] << ", lower_bound " << counts[1]
            << ", upper_bound " << counts[2] << ", interior_spurious " << counts[3] << "\n";
  }
  res.path = write_table(cfg, "basins.csv", res.table);
  res.summary = summary.str();
  return res;
}

} // namespace wrilab
