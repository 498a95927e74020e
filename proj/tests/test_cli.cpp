#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(LPMLAB_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch() {
  const fs::path root = fs::temp_directory_path() / "lpmlab_cli_test";
  fs::remove_all(root);
  fs::create_directories(root);
  setenv("LPMLAB_OUTPUT_ROOT", (root / "runs").c_str(), 1);
  return root;
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("version flag") {
  const Result r = run("--version");
  CHECK(r.code == 0);
  CHECK(r.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("verify nonsense").code == 2);
  CHECK(run("run").code == 2);
}

TEST_CASE("verify grid passes") {
  const Result r = run("verify grid");
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("malformed configs exit with 2 and create no run directory") {
  const fs::path root = scratch();
  CHECK(run("run " + write(root / "bad.json", "{\"command\": ").string()).code == 2);
  CHECK(run("run " + write(root / "unknown.json", "{\"command\": \"spectrum\", \"colour\": 1}").string()).code == 2);
  CHECK(run("run " + (root / "missing.json").string()).code == 2);
  CHECK_FALSE(fs::exists(root / "runs"));
}

TEST_CASE("run then report") {
  const fs::path root = scratch();
  const fs::path cfg = write(root / "spectrum.json",
                             "{\"command\": \"spectrum\", \"dimension\": 1, \"resolution\": 64, "
                             "\"body\": {\"type\": \"sphere\"}, \"spectrum\": {\"count\": 5}}");
  const Result r = run("run " + cfg.string());
  REQUIRE(r.code == 0);
  const std::string marker = "run directory: ";
  const auto pos = r.out.find(marker);
  REQUIRE(pos != std::string::npos);
  std::string dir = r.out.substr(pos + marker.size());
  dir = dir.substr(0, dir.find('\n'));
  CHECK(fs::path(dir).parent_path() == root / "runs");
  CHECK(fs::exists(fs::path(dir) / "manifest.json"));

  // Same config hashes to the same directory.
  const Result again = run("run " + cfg.string());
  CHECK(again.out.find(dir) != std::string::npos);

  const Result rep = run("report " + dir);
  CHECK(rep.code == 0);
  CHECK(fs::exists(fs::path(dir) / "spectrum_tidy.csv"));
  CHECK(run("report " + (root / "nowhere").string()).code == 2);
  fs::create_directories(root / "empty");
  CHECK(run("report " + (root / "empty").string()).code == 2);
}

TEST_CASE("failed checks exit with 1") {
  const fs::path root = scratch();
  // Eight nodes on the circle miss the sphere-spectrum bound for l = 3.
  const fs::path cfg = write(root / "coarse.json",
                             "{\"command\": \"spectrum\", \"dimension\": 1, \"resolution\": 8, "
                             "\"body\": {\"type\": \"sphere\"}, \"spectrum\": {\"count\": 7}}");
  CHECK(run("run " + cfg.string()).code == 1);
}
