#include "doctest.h"
#include "json.hpp"
#include "lpmlab/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lpm;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lpmlab_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

std::string config(const fs::path& out, const std::string& body) {
  return "{\"output_dir\": \"" + out.string() + "\", " + body + "}";
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("sha256 matches the standard test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("check helpers compare against their bound") {
  CHECK(check_le("a", 1, 2, "").passed);
  CHECK_FALSE(check_le("a", 3, 2, "").passed);
  CHECK(check_ge("a", 3, 2, "").passed);
  CHECK_FALSE(check_ge("a", 1, 2, "").passed);
  CHECK(check_info("a", 5, "").passed);
  std::ostringstream os;
  print_checks(os, {check_le("tiny", 1.23456e-11, 1e-9, "")});
  CHECK(os.str().find("1.23456e-11") != std::string::npos);
}

TEST_CASE("schema errors exit with 2 and create nothing") {
  const fs::path out = fresh_dir("schema");
  CHECK(run_config_text("{ not json").exit_code == exit_schema);
  CHECK(run_config_text(config(out, "\"command\": \"dance\"")).exit_code == exit_schema);
  CHECK(run_config_text(config(out, "\"command\": \"spectrum\", \"dimension\": 2, \"resolution\": [16, 32], "
                                    "\"surprise\": 1")).exit_code == exit_schema);
  CHECK(run_config_text(config(out, "\"command\": \"spectrum\", \"dimension\": 2, \"resolution\": 16"))
            .exit_code == exit_schema);
  CHECK(run_config_text(config(out, "\"command\": \"solve\", \"dimension\": 1, \"resolution\": 5, \"p\": -5"))
            .exit_code == exit_schema);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("spectrum run writes hashed artifacts and a manifest") {
  const fs::path out = fresh_dir("spectrum");
  const RunOutcome r = run_config_text(config(
      out, "\"command\": \"spectrum\", \"dimension\": 1, \"resolution\": 64, \"body\": {\"type\": \"sphere\"}, "
           "\"spectrum\": {\"count\": 7}"));
  REQUIRE(r.exit_code == exit_ok);
  CHECK(r.run_dir == out.string());
  const nlohmann::json m = read_json(out / "manifest.json");
  CHECK(m["command"] == "spectrum");
  CHECK(m["exit_code"] == 0);
  REQUIRE(m["files"].is_array());
  CHECK(m["files"].size() >= 2);
  for (const auto& f : m["files"]) {
    const std::string name = f["path"];
    CAPTURE(name);
    CHECK(f["sha256"] == sha256_file((out / name).string()));
    CHECK(f["bytes"] == fs::file_size(out / name));
  }
  std::ifstream csv(out / "spectrum.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "index,eigenvalue,multiplicity_cluster");

  const auto files = report(out.string());
  CHECK_FALSE(files.empty());
  CHECK(fs::exists(out / "spectrum_tidy.csv"));
  fs::remove_all(out);
}

TEST_CASE("solve run reaches the sphere for n = 1, p = -5") {
  const fs::path out = fresh_dir("solve");
  const RunOutcome r = run_config_text(config(
      out, "\"command\": \"solve\", \"dimension\": 1, \"resolution\": 96, \"p\": -5, "
           "\"symmetry\": {\"k\": 3}, "
           "\"body\": {\"type\": \"perturbed_sphere\", \"modes\": [{\"l\": 3, \"m\": 0, \"amplitude\": 0.05}]}"));
  CHECK(r.exit_code == exit_ok);
  CHECK(fs::exists(out / "solution.csv"));
  CHECK(fs::exists(out / "residual.csv"));
  fs::remove_all(out);
}

TEST_CASE("flow run reports its trajectory") {
  const fs::path out = fresh_dir("flow");
  const RunOutcome r = run_config_text(config(
      out, "\"command\": \"flow\", \"dimension\": 1, \"resolution\": 32, \"alpha\": 0.5, "
           "\"body\": {\"type\": \"sphere\"}, \"flow\": {\"mode\": \"raw\", \"dt_max\": 0.001}"));
  CHECK(r.exit_code == exit_ok);
  std::ifstream csv(out / "trajectory.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,m,M,gamma,volume,F,residual,clamps");
  CHECK(report(out.string()).size() >= 1);
  CHECK(fs::exists(out / "trajectory_tidy.csv"));
  fs::remove_all(out);
}

TEST_CASE("report rejects missing and empty directories") {
  const fs::path out = fresh_dir("empty");
  CHECK_THROWS_AS(report(out.string()), Error);
  fs::create_directories(out);
  CHECK_THROWS_AS(report(out.string()), Error);
  fs::remove_all(out);
}

TEST_CASE("verify suite through a config") {
  const fs::path out = fresh_dir("verify");
  const RunOutcome r = run_config_text(config(out, "\"command\": \"verify\", \"verify\": {\"suite\": \"grid\"}"));
  CHECK(r.exit_code == exit_ok);
  CHECK_FALSE(r.checks.empty());
  fs::remove_all(out);
}
