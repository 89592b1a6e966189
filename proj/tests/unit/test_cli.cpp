#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Result {
  int code;
  std::string output;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(GKDV_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  std::array<char, 4096> buf;
  while (std::fgets(buf.data(), buf.size(), p)) out += buf.data();
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gkdv_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("cli: list and usage") {
  const Result list = cli("list-experiments");
  CHECK(list.code == 0);
  CHECK(list.output.find("soliton_regression") != std::string::npos);
  CHECK(list.output.find("interpolation_probe") != std::string::npos);
  CHECK(cli("").code == 1);
  CHECK(cli("frobnicate").code == 1);
  CHECK(cli("validate /nonexistent.json").code == 1);
}

TEST_CASE("cli: validate") {
  CHECK(cli("validate " GKDV_CONFIG_DIR "/soliton_regression.json").code == 0);
  const auto bad = scratch("missing_n.json");
  std::ofstream(bad) << "{\n  \"experiment\": \"interpolation_probe\",\n  \"grid\": { \"half_width_L\": 10 }\n}\n";
  const Result r = cli("validate " + bad.string());
  CHECK(r.code == 1);
  CHECK(r.output.find("grid.n_points") != std::string::npos);
  CHECK(r.output.find(":3:") != std::string::npos);
}

TEST_CASE("cli: run and report") {
  const auto root = scratch("runs");
  std::filesystem::remove_all(root);
  const Result run = cli("run " GKDV_CONFIG_DIR "/interpolation_probe.json --output-root " + root.string());
  CHECK(run.code == 0);
  const auto dir = root / "interpolation_probe";
  for (const char* f : {"manifest.json", "diagnostics.csv", "verdicts.json", "summary.txt", "interpolation_ratio.dat"})
    CHECK(std::filesystem::exists(dir / f));
  const Result rep = cli("report " + dir.string());
  CHECK(rep.code == 0);
  CHECK(rep.output.find("AC10") != std::string::npos);
  CHECK(cli("report " + (root / "nothing").string()).code == 1);
}
