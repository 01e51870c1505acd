// Command-line front end: verify, scan, theorems, basins.

#include "wrilab/commands.hpp"
#include "wrilab/config.hpp"
#include "wrilab/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Objective-landscape laboratory for 1D acoustic transmission inversion"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::string outdir;
  unsigned jobs = 0;
  bool print_config = false;

  auto add_common = [&](CLI::App* sub) {
    auto* cfg_opt = sub->add_option("--config", config_path, "Config file (key = value lines)");
    sub->add_option("--preset", preset_name, "Built-in configuration")
        ->check(CLI::IsMember({"cfg0"}))
        ->excludes(cfg_opt);
    sub->add_option("--out", outdir, "Output directory (overrides outdir)");
    sub->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    sub->add_flag("--print-config", print_config, "Print the effective configuration");
  };

  auto* verify = app.add_subcommand("verify", "Run the operator-identity suite; writes verify.csv");
  auto* scan = app.add_subcommand("scan", "Scan all objectives over c; writes scan.csv");
  auto* theorems =
      app.add_subcommand("theorems", "Check far-region minimizers; writes theorems.csv");
  auto* basins = app.add_subcommand("basins", "Run descents from a start grid; writes basins.csv");
  for (auto* sub : {verify, scan, theorems, basins}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    wrilab::RunConfig cfg = config_path.empty()
                                ? wrilab::preset(preset_name.empty() ? "cfg0" : preset_name)
                                : wrilab::load_config(config_path);
    if (!outdir.empty()) cfg.outdir = outdir;
    cfg.validate();
    if (print_config) std::cout << wrilab::to_config_text(cfg);

    wrilab::CommandResult res;
    if (verify->parsed()) res = wrilab::cmd_verify(cfg, jobs);
    else if (scan->parsed()) res = wrilab::cmd_scan(cfg, jobs);
    else if (theorems->parsed()) res = wrilab::cmd_theorems(cfg, jobs);
    else res = wrilab::cmd_basins(cfg, jobs);

    std::cout << res.summary << "wrote " << res.path << "\n";
    return res.exit_code;
  } catch (const wrilab::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
