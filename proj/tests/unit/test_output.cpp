#include "gkdv/experiments.hpp"
#include "gkdv/output.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gkdv;

TEST_CASE("exit codes") {
  const Verdict pass{"AC1", VerdictStatus::pass, 1, 1, 0, ""};
  const Verdict fail{"AC1", VerdictStatus::fail, 1, 1, 0, ""};
  const Verdict inc{"AC1", VerdictStatus::inconclusive, 1, 1, 0, ""};
  CHECK(exit_code({}) == 0);
  CHECK(exit_code({pass, pass}) == 0);
  CHECK(exit_code({pass, inc}) == 3);
  CHECK(exit_code({inc, fail}) == 2);
  CHECK(verdict_status_from_string("inconclusive") == VerdictStatus::inconclusive);
  CHECK_THROWS(verdict_status_from_string("maybe"));
}

TEST_CASE("verdict JSON round trip") {
  const std::vector<Verdict> v{{"AC5", VerdictStatus::pass, 0.386, 0.3849, 0.0385, "note"},
                               {"AC7", VerdictStatus::inconclusive, std::nan(""), 0.25, INFINITY, ""}};
  const auto back = verdicts_from_json(json::parse(verdicts_to_json(v).dump()));
  REQUIRE(back.size() == 2);
  CHECK(back[0].clause_id == "AC5");
  CHECK(back[0].measured == 0.386);
  CHECK(back[0].note == "note");
  CHECK(back[1].status == VerdictStatus::inconclusive);
  CHECK(std::isnan(back[1].measured));
  CHECK(std::isinf(back[1].tolerance));
}

TEST_CASE("run directory") {
  ExperimentReport r;
  r.experiment = "interpolation_probe";
  r.run_id = "probe";
  r.rows = {{0.5, "ratio", 0.1, ""}, {1.0, "ratio", 1.0 / 3.0, "saturated"}};
  r.series = {{"ratio", "lambda", "ratio", {0.5, 1.0}, {0.1, 0.2}}};
  r.verdicts = {{"AC10", VerdictStatus::pass, 1.03, 1.0, 2.0, ""}};
  r.summary = {"line one"};
  CHECK(diagnostics_csv(r) ==
        "run_id,t,name,value,flags\nprobe,0.5,ratio,0.10000000000000001,\nprobe,1,ratio,0.33333333333333331,saturated\n");

  ExperimentConfig cfg = parse_config(R"({"experiment": "interpolation_probe", "grid": {"half_width_L": 1, "n_points": 16}})", "x");
  cfg.output_dir = std::filesystem::temp_directory_path() / "gkdv_output_test";
  std::filesystem::remove_all(cfg.output_dir);
  const auto dir = write_run(cfg, r);
  for (const char* f : {"manifest.json", "diagnostics.csv", "verdicts.json", "summary.txt", "ratio.dat"})
    CHECK(std::filesystem::exists(dir / f));
  const StoredRun s = read_run(dir);
  CHECK(s.manifest.at("experiment") == "interpolation_probe");
  CHECK(s.manifest.at("config_hash").get<std::string>().size() == 16);
  CHECK(s.manifest.at("exit_code") == 0);
  REQUIRE(s.verdicts.size() == 1);
  CHECK(s.verdicts[0].clause_id == "AC10");
  CHECK(s.summary.find("line one") != std::string::npos);
  std::ifstream dat(dir / "ratio.dat");
  std::stringstream text;
  text << dat.rdbuf();
  CHECK(text.str() == "# lambda  ratio\n0.5 0.10000000000000001\n1 0.20000000000000001\n");
  CHECK_THROWS(read_run(dir / "missing"));
  std::filesystem::remove_all(dir);
}
