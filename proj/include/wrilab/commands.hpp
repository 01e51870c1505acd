#pragma once

// The four command-line workflows, as library functions so they can be
// tested without a process boundary.  Each writes one CSV file into
// cfg.outdir and returns the table it wrote together with an exit code.

#include "wrilab/config.hpp"

#include <string>
#include <vector>

namespace wrilab {

// Decimal with 17 significant digits (round-trips every double).
std::string csv_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string text() const;
};

struct CommandResult {
  int exit_code = 0;
  std::string path;  // file written
  CsvTable table;
  std::string summary;  // human-readable, one line per row or check
};

struct VerifyCheck {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Identity suite: adjointness, normal operator, trace norm, extension,
// plateau, WRI routes, weight operator, quadratic-form rewrite.
std::vector<VerifyCheck> verify_checks(const RunConfig& cfg, unsigned jobs = 1);

CommandResult cmd_verify(const RunConfig& cfg, unsigned jobs = 1);
CommandResult cmd_scan(const RunConfig& cfg, unsigned jobs = 1);
CommandResult cmd_theorems(const RunConfig& cfg, unsigned jobs = 1);
CommandResult cmd_basins(const RunConfig& cfg, unsigned jobs = 1);

} // namespace wrilab
