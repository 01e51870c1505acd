// Configuration parsing, CSV emission, the four workflows and the
// command-line front end's exit-status contract.

#include "wrilab/analysis.hpp"
#include "wrilab/commands.hpp"
#include "wrilab/config.hpp"
#include "wrilab/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wrilab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wrilab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const std::string& header_of(const CommandResult& res, std::size_t k) { return res.table.header[k]; }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WRILAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

// ---------------------------------------------------------------- config

TEST(Config, PresetMatchesReferenceConfiguration) {
  const RunConfig cfg = preset("cfg0");
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.geo.z_s, 0.3);
  EXPECT_EQ(cfg.geo.z_r, 0.8);
  EXPECT_EQ(cfg.geo.T, 1.5);
  EXPECT_EQ(cfg.c_star, 1.0);
  EXPECT_EQ(cfg.scan_points, 2001u);
  EXPECT_EQ(cfg.eps, 0.2);
  EXPECT_DOUBLE_EQ(cfg.dt_for(0.02), 0.0005);
  EXPECT_THROW(preset("cfg1"), ConfigError);
}

TEST(Config, RoundTripsThroughText) {
  RunConfig cfg = preset("cfg0");
  cfg.lambdas = {0.1 / 3.0, 0.02};
  cfg.alphas = {0.3};
  cfg.wavelet = WaveletKind::bump_derivative;
  cfg.dt = 1e-3;
  cfg.outdir = "results/run 1";
  const RunConfig back = parse_config(to_config_text(cfg));
  EXPECT_EQ(to_config_text(back), to_config_text(cfg));
  EXPECT_EQ(back.lambdas, cfg.lambdas);
  EXPECT_EQ(back.wavelet, cfg.wavelet);
  EXPECT_EQ(back.outdir, cfg.outdir);
}

TEST(Config, ParsesCommentsListsAndAuto) {
  const RunConfig cfg = parse_config(
      "# reference run\n"
      "lambda = 0.04, 0.02   ; two scales\n"
      "\n"
      "alpha=0.25\n"
      "dt = auto\n"
      "wavelet = bump_derivative\n"
      "scan_points = 501\n");
  EXPECT_EQ(cfg.lambdas, (std::vector<double>{0.04, 0.02}));
  EXPECT_EQ(cfg.alphas, std::vector<double>{0.25});
  EXPECT_EQ(cfg.dt, 0.0);
  EXPECT_EQ(cfg.wavelet, WaveletKind::bump_derivative);
  EXPECT_EQ(cfg.scan_points, 501u);
  EXPECT_EQ(cfg.geo.z_s, 0.3);  // untouched keys keep the preset values
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("colour = red\n"), ConfigError);
  EXPECT_THROW(parse_config("z_s = 0.3\nz_s = 0.4\n"), ConfigError);
  EXPECT_THROW(parse_config("z_s = 0.3x\n"), ConfigError);
  EXPECT_THROW(parse_config("z_s\n"), ConfigError);
  EXPECT_THROW(parse_config("lambda = \n"), ConfigError);
  EXPECT_THROW(parse_config("scan_points = -3\n"), ConfigError);
  EXPECT_THROW(parse_config("wavelet = ricker\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/wrilab.ini"), ConfigError);
}

TEST(Config, NamesViolatedInvariant) {
  EXPECT_NE(config_error("z_s = 0.8\n").find("z_s != z_r"), std::string::npos);
  EXPECT_NE(config_error("T = 1.0\n").find("transit"), std::string::npos);  // T = tau(c_min)
  EXPECT_NE(config_error("lambda = 0.5\n").find("lambda_0"), std::string::npos);
  EXPECT_NE(config_error("c_star = 3\n").find("c_star"), std::string::npos);
  EXPECT_NE(config_error("alpha = 0\n").find("alpha"), std::string::npos);
  EXPECT_NE(config_error("eps = 0.6\n").find("eps"), std::string::npos);
  EXPECT_NE(config_error("dz = 0\n").find("dz"), std::string::npos);
  EXPECT_EQ(config_error(""), "");
}

// ---------------------------------------------------------------- CSV

TEST(Csv, SeventeenSignificantDigitsRoundTrip) {
  EXPECT_EQ(csv_number(0.1), "0.10000000000000001");
  EXPECT_EQ(csv_number(2.0), "2");
  for (double v : {0.15625, 1.0 / 3.0, -2.5e-17, 6.02214076e23})
    EXPECT_EQ(std::strtod(csv_number(v).c_str(), nullptr), v);
  CsvTable t{{"a", "b"}, {{"1", "2"}, {"3", ""}}};
  EXPECT_EQ(t.text(), "a,b\n1,2\n3,\n");
}

// ---------------------------------------------------------------- workflows

TEST(Commands, ScanTableLayoutAndValues) {
  RunConfig cfg = preset("cfg0");
  cfg.outdir = scratch_dir("scan").string();
  const CommandResult res = cmd_scan(cfg, 4);
  EXPECT_EQ(res.exit_code, 0);
  const std::vector<std::string> header{"c", "J_fwi", "J_wri_a0.25", "J_wri_a0.5", "J_wri_a0.6",
                                        "J_ann_signed", "J_ann_squared", "J_ann_norm"};
  EXPECT_EQ(res.table.header, header);
  ASSERT_EQ(res.table.rows.size(), 2001u);
  EXPECT_EQ(slurp(res.path), res.table.text());

  const double lambda = cfg.primary_lambda();
  const double edge = separation_scale(cfg.geo) * lambda;
  std::size_t best = 0;
  double best_value = INFINITY;
  for (std::size_t i = 0; i < res.table.rows.size(); ++i) {
    const auto& row = res.table.rows[i];
    const double c = std::stod(row[0]);
    const double fwi = std::stod(row[1]);
    if (fwi < best_value) best_value = fwi, best = i;
    if (std::abs(c - cfg.c_star) > edge) {
      const double k = normal_constant(cfg.geo, Velocity(c));
      EXPECT_NEAR(std::stod(row[2]) / fwi, 0.0625 / (k + 0.0625), 1e-12) << "c " << c;
    }
  }
  EXPECT_LE(std::abs(std::stod(res.table.rows[best][0]) - cfg.c_star), 0.5 * 0.00075 + 1e-12);
}

TEST(Commands, ScanRowAtTargetVanishes) {
  RunConfig cfg = preset("cfg0");
  cfg.scan_points = 1501;  // step 0.001, so c_star is a node
  cfg.outdir = scratch_dir("scan_target").string();
  const CommandResult res = cmd_scan(cfg, 2);
  const auto& row = res.table.rows[500];
  ASSERT_NEAR(std::stod(row[0]), 1.0, 1e-15);
  // Misfit objectives vanish on consistent data; the annihilator moments
  // of u = w / 4 (||u||^2 = 1/16, support [0, lambda]) are only O(lambda).
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_LE(std::abs(std::stod(row[k])), 1e-12) << header_of(res, k);
  const double lambda = cfg.primary_lambda();
  EXPECT_LE(std::abs(std::stod(row[5])), lambda / 16.0);
  EXPECT_LE(std::stod(row[6]), lambda * lambda / 16.0);
  EXPECT_LE(std::stod(row[7]), lambda * lambda);
}

TEST(Commands, OutputIndependentOfWorkerCount) {
  RunConfig cfg = preset("cfg0");
  cfg.basin_starts = 41;
  for (auto cmd : {&cmd_scan, &cmd_basins, &cmd_theorems}) {
    cfg.outdir = scratch_dir("det1").string();
    const std::string a = slurp((*cmd)(cfg, 1).path);
    cfg.outdir = scratch_dir("det4").string();
    const std::string b = slurp((*cmd)(cfg, 4).path);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, b);
  }
}

TEST(Commands, TheoremRowsAndPremiseColumns) {
  RunConfig cfg = preset("cfg0");
  cfg.outdir = scratch_dir("theorems").string();
  const CommandResult res = cmd_theorems(cfg, 4);
  ASSERT_EQ(res.table.rows.size(), 12u);
  std::size_t t1 = 0, t2 = 0;
  for (const auto& row : res.table.rows) {
    ASSERT_EQ(row.size(), res.table.header.size());
    (row[0] == "1" ? t1 : t2)++;
    if (row[0] == "2" && row[2] == "0.5") {
      EXPECT_EQ(row[5], "0");
      EXPECT_EQ(row[6], "any");
      EXPECT_EQ(row[8], "pass");
    }
    if (row[0] == "1") {
      EXPECT_EQ(row[8], "pass");
    }
    EXPECT_EQ(row[3], "16");
    EXPECT_EQ(row[4], "0.5");
  }
  EXPECT_EQ(t1, 3u);
  EXPECT_EQ(t2, 9u);
}

TEST(Commands, EmptyFarRegionIsNotApplicableAndExcludedFromExitStatus) {
  RunConfig cfg = preset("cfg0");
  cfg.lambdas = {0.07};  // L lambda = 1.12 exceeds both c_max - c_star and c_star - c_min
  cfg.outdir = scratch_dir("theorems_na").string();
  const CommandResult res = cmd_theorems(cfg, 2);
  for (const auto& row : res.table.rows) EXPECT_EQ(row[8], "not_applicable");
  EXPECT_EQ(res.exit_code, 0);
}

TEST(Commands, BasinLabelsFollowFarRegionSlopes) {
  RunConfig cfg = preset("cfg0");
  cfg.basin_starts = 151;  // step 0.01, so c_star is a start
  cfg.outdir = scratch_dir("basins").string();
  const CommandResult res = cmd_basins(cfg, 4);
  EXPECT_EQ(res.table.header,
            (std::vector<std::string>{"objective", "c0", "c_final", "label", "iterations", "final_grad"}));
  const double edge = separation_scale(cfg.geo) * cfg.primary_lambda();
  for (const auto& row : res.table.rows) {
    const double c0 = std::stod(row[1]);
    if (row[0] == "fwi" && c0 > cfg.c_star + edge) {
      EXPECT_EQ(row[3], "upper_bound") << c0;
    }
    if (row[0] == "wri_a0.25" && c0 < cfg.c_star - edge) {
      EXPECT_EQ(row[3], "lower_bound") << c0;
    }
    if (std::abs(c0 - cfg.c_star) < 1e-12) {
      EXPECT_EQ(row[3], "target") << row[0];
      EXPECT_LE(std::stoul(row[4]), 1u) << row[0];
    }
  }
  EXPECT_EQ(res.table.rows.size(), 4u * 151u);
}

TEST(Commands, VerifySuitePassesOnReferenceConfiguration) {
  RunConfig cfg = preset("cfg0");
  cfg.outdir = scratch_dir("verify").string();
  const CommandResult res = cmd_verify(cfg, 4);
  EXPECT_EQ(res.exit_code, 0) << res.summary;
  EXPECT_EQ(res.table.header, (std::vector<std::string>{"check", "measured", "tolerance", "pass"}));
  for (const auto& row : res.table.rows) EXPECT_EQ(row[3], "true") << row[0];
  EXPECT_TRUE(fs::exists(fs::path(cfg.outdir) / "verify.csv"));
}

TEST(Commands, RejectInvalidConfiguration) {
  RunConfig cfg = preset("cfg0");
  cfg.geo.z_r = cfg.geo.z_s;
  EXPECT_THROW(cmd_scan(cfg), ConfigError);
  EXPECT_THROW(cmd_verify(cfg), ConfigError);
}

// ---------------------------------------------------------------- executable

TEST(Executable, ExitStatusContract) {
  const fs::path dir = scratch_dir("exe");
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_NE(run_cli(""), 0);
  EXPECT_NE(run_cli("scan --preset cfg9"), 0);

  const fs::path bad = dir / "bad.ini";
  std::ofstream(bad) << "z_s = 0.8\n";
  EXPECT_EQ(run_cli("scan --config " + bad.string() + " --out " + dir.string()), 2);

  const fs::path good = dir / "small.ini";
  std::ofstream(good) << "lambda = 0.02\nalpha = 0.25, 0.6\nscan_points = 201\n";
  EXPECT_EQ(run_cli("scan --config " + good.string() + " --out " + (dir / "s").string() + " --jobs 2"), 0);
  const std::string text = slurp(dir / "s" / "scan.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "c,J_fwi,J_wri_a0.25,J_wri_a0.6,J_ann_signed,J_ann_squared,J_ann_norm");
  EXPECT_EQ(run_cli("theorems --config " + good.string() + " --out " + (dir / "t").string()), 0);
}
