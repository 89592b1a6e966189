#include "gkdv/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace gkdv;

namespace {

const DiagnosticRow* find_row(const ExperimentReport& r, const std::string& name, double t = NAN) {
  for (const auto& row : r.rows)
    if (row.name == name && (std::isnan(t) || std::abs(row.t - t) < 1e-12)) return &row;
  return nullptr;
}

std::vector<Verdict> clause(const ExperimentReport& r, const std::string& id) {
  std::vector<Verdict> out;
  for (const auto& v : r.verdicts)
    if (v.clause_id == id) out.push_back(v);
  return out;
}

ExperimentReport run_text(const std::string& text) { return run_experiment(parse_config(text, "inline")); }

}  // namespace

TEST_CASE("registry") {
  CHECK(experiments().size() == 8);
  for (const auto& e : experiments()) CHECK_FALSE(e.description.empty());
}

TEST_CASE("interpolation probe default config") {
  const ExperimentReport r = run_experiment(load_config(GKDV_CONFIG_DIR "/interpolation_probe.json"));
  REQUIRE(clause(r, "AC10").size() == 1);
  CHECK(clause(r, "AC10")[0].status == VerdictStatus::pass);
  const DiagnosticRow* limit = find_row(r, "ratio_theta_limit", 1e-4);
  REQUIRE(limit);
  CHECK(limit->value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("linear Airy decay default config") {
  const ExperimentReport r = run_experiment(load_config(GKDV_CONFIG_DIR "/linear_airy_decay.json"));
  CHECK(exit_code(r.verdicts) == 0);
  CHECK(clause(r, "AC5").size() == 5);
  REQUIRE(find_row(r, "fit_rejected", 0.0));
  CHECK(find_row(r, "fit_rejected", 0.0)->value == 1.0);
  REQUIRE(find_row(r, "rate_ratio_t4_over_t1"));
  CHECK(find_row(r, "rate_ratio_t4_over_t1")->value == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("scheduled decay with zero data is inconclusive, weight checks still pass") {
  const ExperimentReport r = run_text(R"({
    "experiment": "theorem1_decay",
    "grid": { "half_width_L": 40, "n_points": 256 },
    "solver": { "dt": 1e-2, "final_time_T": 0.5, "sponge": { "width": 8, "strength": 5 } },
    "initial_data": { "type": "zero" }
  })");
  for (const auto& v : clause(r, "AC3")) CHECK(v.status == VerdictStatus::pass);
  CHECK(clause(r, "AC4").size() == 3);
  for (const auto& v : clause(r, "AC4")) CHECK(v.status == VerdictStatus::pass);
  REQUIRE(clause(r, "AC6").size() == 1);
  CHECK(clause(r, "AC6")[0].status == VerdictStatus::inconclusive);
  CHECK(exit_code(r.verdicts) == 3);
  const DiagnosticRow* w = find_row(r, "W_scheduled", 0.5);
  REQUIRE(w);
  CHECK(w->value == 0.0);
}

TEST_CASE("contaminated runs only produce inconclusive verdicts") {
  const ExperimentReport r = run_text(R"({
    "experiment": "persistence_kato",
    "grid": { "half_width_L": 20, "n_points": 256 },
    "solver": { "dt": 1e-3, "final_time_T": 2, "snapshot_interval": 0.1 },
    "initial_data": { "type": "gaussian", "width": 1 }
  })");
  CHECK(r.flags.boundary_contamination);
  REQUIRE(r.verdicts.size() == 2);
  for (const auto& v : r.verdicts) CHECK(v.status == VerdictStatus::inconclusive);
}

TEST_CASE("unperturbed soliton leaves no residual") {
  const ExperimentReport r = run_text(R"({
    "experiment": "soliton_perturbation",
    "grid": { "half_width_L": 64, "n_points": 1024 },
    "solver": { "dt": 1e-3, "final_time_T": 1, "sponge": { "width": 15, "strength": 50 } },
    "initial_data": { "type": "soliton_plus_bump", "soliton": { "c": 1 },
                      "bump": { "center": -10, "radius": 0.25, "amplitude": 0 } },
    "params": { "left_window_x_max": 30, "weighted_windows": [10, 20] }
  })");
  REQUIRE(find_row(r, "residual_max"));
  CHECK(find_row(r, "residual_max")->value < 1e-3);
  CHECK(find_row(r, "bump_mass")->value == 0.0);
  CHECK(std::abs(find_row(r, "speed_shift")->value) < 1e-4);
  CHECK(find_row(r, "residual_bracket_norm_X=20")->value < 1e-3);
}

TEST_CASE("regularity link with zero data") {
  const ExperimentReport r = run_text(R"({
    "experiment": "regularity_link",
    "grid": { "half_width_L": 32, "n_points": 256 },
    "solver": { "dt": 1e-2, "final_time_T": 0.2, "sponge": { "width": 7, "strength": 5 } },
    "initial_data": { "type": "zero" },
    "params": { "rough_data": { "type": "zero" } }
  })");
  CHECK(r.verdicts.empty());
  CHECK_FALSE(r.rows.empty());
  for (const auto& row : r.rows) CHECK(row.value == 0.0);
}

TEST_CASE("rough box is exactly zero outside its support") {
  const ExperimentReport r = run_text(R"({
    "experiment": "corollary1_left_tail",
    "grid": { "half_width_L": 64, "n_points": 2048 },
    "solver": { "dt": 1e-3, "final_time_T": 0.5, "sponge": { "width": 15, "strength": 200 } },
    "initial_data": { "type": "smoothed_box", "edges": [-0.05, 0.05], "smoothing": 0.02 },
    "params": { "fit_times": [0.5], "left_window_x_max": 20, "weighted_windows": [10, 20],
                "backward_mirror": false }
  })");
  REQUIRE(find_row(r, "datum_outside_support_max", 0.0));
  CHECK(find_row(r, "datum_outside_support_max", 0.0)->value == 0.0);
  CHECK(clause(r, "AC7").size() == 1);
}
