#pragma once

#include "lpmlab/common.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lpm {

// One measured-vs-expected row of a run manifest or verification table.
struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  std::string relation;  // "<=", ">=" or "info"
  bool passed = false;
  std::string source;    // identity or property being checked
};

Check check_le(std::string name, double value, double tol, std::string source);
Check check_ge(std::string name, double value, double bound, std::string source);
Check check_info(std::string name, double value, std::string source);

void print_checks(std::ostream& os, const std::vector<Check>& checks);

const std::vector<std::string>& suite_names();

// Module checks at pinned resolutions; "all" runs every suite.
std::vector<Check> run_suite(const std::string& name);

enum ExitCode { exit_ok = 0, exit_check_failed = 1, exit_schema = 2, exit_numerical = 3 };

struct RunOutcome {
  int exit_code = exit_ok;
  std::string run_dir;  // empty when no directory was created
  std::string message;
  std::vector<Check> checks;
};

RunOutcome run_config_file(const std::string& path);
RunOutcome run_config_text(const std::string& text);

// Tidy CSVs for a finished run directory; returns the files written.
std::vector<std::string> report(const std::string& dir);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);

}  // namespace lpm
