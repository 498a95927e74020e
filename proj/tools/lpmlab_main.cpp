#include "CLI11.hpp"
#include "lpmlab/lpmlab.h"

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"L_p Minkowski problem and Gauss curvature flow laboratory"};
  app.set_version_flag("--version", std::string(lpm_version()));
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Execute a JSON run config");
  run->add_option("config", config, "Path to the run config")->required();

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "grid|body|symmetry|spectral|functional|flow|all")
      ->check(CLI::IsMember({"grid", "body", "symmetry", "spectral", "functional", "flow", "all"}));

  std::string dir;
  auto* report = app.add_subcommand("report", "Write tidy CSVs for a run directory");
  report->add_option("dir", dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) {
    int exit_code = 0;
    char run_dir[4096] = {0};
    const lpm_status s = lpm_run_config(config.c_str(), &exit_code, run_dir, sizeof run_dir);
    if (s != LPM_OK) {
      std::fprintf(stderr, "error: %s\n", lpm_last_error());
      return 3;
    }
    if (run_dir[0]) std::printf("run directory: %s\n", run_dir);
    if (exit_code != 0) std::fprintf(stderr, "error: %s\n", lpm_last_error());
    return exit_code;
  }
  if (*verify) {
    int failures = 0;
    const lpm_status s = lpm_verify(suite.c_str(), &failures);
    if (s != LPM_OK) {
      std::fprintf(stderr, "error: %s\n", lpm_last_error());
      return 3;
    }
    if (failures > 0) {
      std::fprintf(stderr, "%d check(s) failed\n", failures);
      return 1;
    }
    return 0;
  }
  const lpm_status s = lpm_report(dir.c_str());
  if (s != LPM_OK) {
    std::fprintf(stderr, "error: %s\n", lpm_last_error());
    return s == LPM_ERR_IO ? 2 : 3;
  }
  return 0;
}
