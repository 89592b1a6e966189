// One line per acceptance criterion. Criteria 1-10 come from the default
// configs; 11 reruns every default config through the CLI and compares
// diagnostics.csv byte for byte against the in-process run.
#include "gkdv/airy.hpp"
#include "gkdv/experiments.hpp"
#include "gkdv/output.hpp"

#include <boost/math/special_functions/airy.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace gkdv;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kConfigs{"soliton_regression", "linear_airy_decay", "theorem1_decay",
                                        "persistence_kato",   "corollary1_left_tail", "soliton_perturbation",
                                        "regularity_link",    "interpolation_probe"};

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what;
}

std::string describe(const std::string& source, const Verdict& v) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %s measured %.6g (expected %.6g, tol %.3g)", source.c_str(),
                std::string(to_string(v.status)).c_str(), v.measured, v.expected, v.tolerance);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  std::map<std::string, Outcome> results;
  std::map<std::string, std::string> csv;
  for (int i = 1; i <= 11; ++i) results["AC" + std::to_string(i)];

  for (const std::string& name : kConfigs) {
    const ExperimentConfig cfg = load_config(fs::path(GKDV_CONFIG_DIR) / (name + ".json"));
    const ExperimentReport r = run_experiment(cfg);
    csv[cfg.run_id] = diagnostics_csv(r);
    for (const Verdict& v : r.verdicts) note(results[v.clause_id], v.status == VerdictStatus::pass, describe(name, v));
    std::fprintf(stderr, "ran %s in %.1f s\n", name.c_str(), r.runtime_seconds);
  }

  // Airy values against an independent implementation.
  const double ai0 = 1.0 / (std::cbrt(9.0) * std::tgamma(2.0 / 3.0));
  for (double x : {0.0, 1.0}) {
    const double ref = x == 0.0 ? ai0 : boost::math::airy_ai(1.0);
    const double err = std::abs(airy(x) - ref);
    char buf[96];
    std::snprintf(buf, sizeof buf, "|Ai(%g) - reference| = %.2e", x, err);
    note(results["AC5"], err <= 1e-9, buf);
  }

  const fs::path root = fs::temp_directory_path() / "gkdv_acceptance";
  fs::remove_all(root);
  std::string cmd = std::string(GKDV_CLI) + " run -j 1 --output-root " + root.string();
  for (const std::string& name : kConfigs) cmd += " " + (fs::path(GKDV_CONFIG_DIR) / (name + ".json")).string();
  cmd += " > " + (root.string() + ".log") + " 2>&1";
  const int status = std::system(cmd.c_str());
  (void)status;
  for (const auto& [run_id, text] : csv) {
    const std::string other = slurp(root / run_id / "diagnostics.csv");
    note(results["AC11"], !text.empty() && other == text, run_id + (other == text ? " identical" : " differs"));
  }

  int failures = 0;
  for (int i = 1; i <= 11; ++i) {
    const std::string id = "AC" + std::to_string(i);
    Outcome& o = results[id];
    if (o.detail.empty()) note(o, false, "no verdict produced");
    std::printf("%-5s %s  %s\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
