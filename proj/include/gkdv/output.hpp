#pragma once

#include "gkdv/config.hpp"
#include "gkdv/experiments.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace gkdv {

inline constexpr const char* kVersion = "1.0.0";

/// diagnostics.csv contents: header "run_id,t,name,value,flags", values at
/// full precision, rows in report order.
std::string diagnostics_csv(const ExperimentReport& report);

json verdicts_to_json(const std::vector<Verdict>& verdicts);
std::vector<Verdict> verdicts_from_json(const json& j);

/// Writes manifest.json, diagnostics.csv, verdicts.json, summary.txt and one
/// <series>.dat per series into cfg.output_dir. Returns that directory.
std::filesystem::path write_run(const ExperimentConfig& cfg, const ExperimentReport& report);

struct StoredRun {
  json manifest;
  std::vector<Verdict> verdicts;
  std::string summary;
};

/// Reads a run directory written by write_run. Throws std::runtime_error when
/// a file is missing or malformed.
StoredRun read_run(const std::filesystem::path& dir);

/// Human-readable verdict table.
std::string format_verdicts(const std::vector<Verdict>& verdicts);

}  // namespace gkdv
