#pragma once

#include "gkdv/config.hpp"
#include "gkdv/solver.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace gkdv {

enum class VerdictStatus { pass, fail, inconclusive };

std::string_view to_string(VerdictStatus s);
VerdictStatus verdict_status_from_string(std::string_view s);

/// Outcome of one acceptance clause. `clause_id` is "AC1" .. "AC11".
struct Verdict {
  std::string clause_id;
  VerdictStatus status = VerdictStatus::inconclusive;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string note;
};

/// A two-column series for plotting, written as <name>.dat.
struct Series {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ExperimentReport {
  std::string experiment;
  std::string run_id;
  std::vector<Verdict> verdicts;
  std::vector<DiagnosticRow> rows;
  std::vector<Series> series;
  std::vector<std::string> summary;  // one line per finding
  TrajectoryFlags flags;             // union over every trajectory of the run
  double runtime_seconds = 0.0;
};

struct ExperimentInfo {
  std::string_view name;
  std::string_view description;
  /// Checks experiment-specific requirements; throws ConfigError.
  void (*check)(const ExperimentConfig&);
  ExperimentReport (*run)(const ExperimentConfig&);
};

const std::vector<ExperimentInfo>& experiments();

/// Throws ConfigError (path "experiment") for an unknown name.
const ExperimentInfo& find_experiment(const ExperimentConfig& cfg);

/// Full validation: generic schema (already done by parse_config) plus the
/// experiment's own requirements.
void check_config(const ExperimentConfig& cfg);

/// Runs the configured experiment and fills runtime and identity fields.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

ExperimentReport run_soliton_regression(const ExperimentConfig& cfg);
ExperimentReport run_linear_airy_decay(const ExperimentConfig& cfg);
ExperimentReport run_theorem1_decay(const ExperimentConfig& cfg);
ExperimentReport run_persistence_kato(const ExperimentConfig& cfg);
ExperimentReport run_corollary1_left_tail(const ExperimentConfig& cfg);
ExperimentReport run_soliton_perturbation(const ExperimentConfig& cfg);
ExperimentReport run_regularity_link(const ExperimentConfig& cfg);
ExperimentReport run_interpolation_probe(const ExperimentConfig& cfg);

/// 0 when every verdict passes (or there are none), 2 when any fails,
/// otherwise 3 for inconclusive.
int exit_code(const std::vector<Verdict>& verdicts);

}  // namespace gkdv
