#include "gkdv/config.hpp"
#include "gkdv/experiments.hpp"

#include <doctest.h>

#include <string>

using namespace gkdv;

namespace {

const char* kValid = R"({
  "experiment": "persistence_kato",
  "seed": 7,
  "grid": { "half_width_L": 50, "n_points": 512 },
  "solver": {
    "k": 1,
    "dt": "auto",
    "final_time_T": 1,
    "sponge": { "width": 10, "strength": 5 }
  },
  "initial_data": { "type": "gaussian", "width": 1 },
  "weights": [ { "kind": "exp_linear", "beta": 0.2 } ],
  "params": { "beta": 0.1 }
})";

ConfigError error_of(const std::string& text) {
  try {
    const ExperimentConfig cfg = parse_config(text, "cfg.json");
    check_config(cfg);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("", 0, "", "");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("valid configuration") {
  const ExperimentConfig cfg = parse_config(kValid, "cfg.json");
  CHECK(cfg.experiment == "persistence_kato");
  CHECK(cfg.run_id == "persistence_kato");
  CHECK(cfg.output_dir == "runs/persistence_kato");
  CHECK(cfg.seed == 7);
  CHECK(cfg.grid.size() == 512);
  CHECK(cfg.auto_dt);
  CHECK(cfg.final_time == 1.0);
  CHECK(cfg.snapshot_interval == doctest::Approx(0.1));
  REQUIRE(cfg.solver.sponge);
  CHECK(cfg.solver.sponge->width == 10.0);
  CHECK(cfg.initial.kind == DataKind::gaussian);
  REQUIRE(cfg.weights.size() == 1);
  CHECK(cfg.weights[0].kind == WeightKind::exp_linear);
  CHECK_NOTHROW(check_config(cfg));
  CHECK(config_hash(cfg.source) == config_hash(parse_config(kValid, "other.json").source));
}

TEST_CASE("missing and malformed fields name their path and line") {
  const ConfigError missing = error_of(replace(kValid, R"(, "n_points": 512)", ""));
  CHECK(missing.path() == "grid.n_points");
  CHECK(missing.line() == 4);
  CHECK(std::string(missing.what()).find("cfg.json:4: grid.n_points:") == 0);

  const ConfigError pow2 = error_of(replace(kValid, "512", "500"));
  CHECK(pow2.path() == "grid.n_points");
  CHECK(pow2.line() == 4);

  const ConfigError unknown = error_of(replace(kValid, R"("k": 1,)", R"("k": 1, "kk": 2,)"));
  CHECK(unknown.path() == "solver.kk");
  CHECK(unknown.line() == 6);

  const ConfigError sponge = error_of(replace(kValid, R"("width": 10,)", R"("width": 20,)"));
  CHECK(sponge.path() == "solver.sponge.width");
  CHECK(sponge.line() == 9);

  const ConfigError weight = error_of(replace(kValid, "exp_linear", "exp_cubic"));
  CHECK(weight.path() == "weights[0].kind");
  CHECK(weight.line() == 12);

  const ConfigError syntax = error_of(replace(kValid, R"("seed": 7,)", R"("seed": 7)"));
  CHECK(syntax.line() == 4);

  CHECK(error_of(replace(kValid, "7", "-7")).path() == "seed");
  CHECK(error_of(replace(kValid, R"("auto")", "-1")).path() == "solver.dt");
  CHECK(error_of(replace(kValid, "persistence_kato", "nope")).path() == "experiment");
  CHECK(error_of(replace(kValid, R"("beta": 0.1)", R"("beta": 0.1, "gamma": 1)")).path() == "params.gamma");
  CHECK(error_of(replace(kValid, R"("type": "gaussian", "width": 1)", R"("type": "box")")).path() ==
        "initial_data.type");
  CHECK(error_of(replace(kValid, R"("experiment": "persistence_kato",)", "")).path() == "experiment");
}

TEST_CASE("experiment-specific requirements") {
  std::string s = replace(kValid, "persistence_kato", "soliton_regression");
  s = replace(s, R"("params": { "beta": 0.1 })", R"("params": {})");
  CHECK(error_of(s).path() == "initial_data.type");
  s = replace(s, R"({ "type": "gaussian", "width": 1 })", R"({ "type": "soliton", "soliton": { "c": 1 } })");
  CHECK(error_of(s).path() == "solver.sponge");

  std::string lin = replace(kValid, "persistence_kato", "linear_airy_decay");
  lin = replace(lin, R"("params": { "beta": 0.1 })", R"("params": {})");
  CHECK(error_of(lin).path() == "solver.nonlinear");
}

TEST_CASE("initial data") {
  const Grid g(20, 256);
  InitialData d;
  d.kind = DataKind::gaussian;
  d.width = 2.5;
  d.amplitude = 3.0;
  const Field f = make_initial_data(d, g, 0);
  CHECK(f.values(g.nearest_index(0.0)) == doctest::Approx(3.0));
  CHECK(f.values(g.nearest_index(2.5)) == doctest::Approx(3.0 * std::exp(-1.0)));

  d.jitter = 0.5;
  const Field a = make_initial_data(d, g, 11), b = make_initial_data(d, g, 11), c = make_initial_data(d, g, 12);
  CHECK((a.values - b.values).abs().maxCoeff() == 0.0);
  CHECK((a.values - c.values).abs().maxCoeff() > 0.0);

  InitialData box;
  box.kind = DataKind::smoothed_box;
  box.left_edge = -1;
  box.right_edge = 1;
  box.smoothing = 0.02;
  const Field bx = make_initial_data(box, g, 0);
  CHECK(bx.values(g.nearest_index(0.0)) == doctest::Approx(1.0));
  CHECK(bx.values(g.nearest_index(5.0)) == 0.0);
}
