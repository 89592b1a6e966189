#pragma once

#include "gkdv/analytic.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/solver.hpp"
#include "gkdv/weights.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gkdv {

using json = nlohmann::json;

/// Malformed or inconsistent configuration. `what()` reads
/// "<origin>:<line>: <path>: <message>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string origin, int line, std::string path, const std::string& message);

  const std::string& origin() const { return origin_; }
  int line() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  std::string origin_;
  int line_;
  std::string path_;
};

/// Source line of every key path in a JSON document ("grid.n_points",
/// "weights[1].kind"). Line 0 means unknown.
class LineIndex {
 public:
  LineIndex() = default;
  LineIndex(std::string origin, std::map<std::string, int> lines)
      : origin_(std::move(origin)), lines_(std::move(lines)) {}

  const std::string& origin() const { return origin_; }
  /// Line of `path`, or of its nearest recorded ancestor.
  int line(std::string path) const;

 private:
  std::string origin_;
  std::map<std::string, int> lines_;
};

struct ParsedDocument {
  json value;
  LineIndex lines;
};

/// Parses JSON text. Syntax errors become ConfigError with the offending line.
ParsedDocument parse_document(std::string_view text, const std::string& origin);

/// Typed, path-aware view of one JSON object. Every accessor records the key
/// it reads; `finish()` rejects keys nobody asked for.
class ConfigNode {
 public:
  ConfigNode(const json& j, std::string path, std::shared_ptr<const LineIndex> lines);

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
  ConfigNode child(const std::string& key) const;
  /// The value under `key`, unchecked. Throws when missing.
  const json& raw(const std::string& key) const;
  std::vector<ConfigNode> children(const std::string& key) const;

  /// Throws ConfigError naming `key` (or this node when key is empty).
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
  void require(bool ok, const std::string& key, const std::string& message) const {
    if (!ok) fail(key, message);
  }
  void finish() const;

 private:
  const json& at(const std::string& key) const;
  std::string join(const std::string& key) const;

  const json* j_;
  std::string path_;
  std::shared_ptr<const LineIndex> lines_;
  mutable std::set<std::string> used_;
};

enum class DataKind { zero, soliton, gaussian, smoothed_box, soliton_plus_bump, frac_exp_tail, samples_file };

/// Initial datum description. Unused fields keep their defaults.
struct InitialData {
  DataKind kind = DataKind::zero;
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;              // gaussian: exp(-((x - center) / width)^2)
  double left_edge = -0.5;         // smoothed_box
  double right_edge = 0.5;
  double smoothing = 0.05;
  double a0 = 1.0;                 // frac_exp_tail: A exp(-a0 (1 + x^2)^{3/4})
  SolitonSpec soliton;             // soliton, soliton_plus_bump
  double bump_center = 0.0;        // soliton_plus_bump
  double bump_radius = 0.25;
  double bump_amplitude = 0.1;
  double jitter = 0.0;             // uniform random shift in [-jitter, jitter], drawn from the seed
  std::filesystem::path file;      // samples_file: n whitespace-separated values
};

std::string_view to_string(DataKind k);

InitialData initial_data_from_node(const ConfigNode& node);

/// Builds the datum on `grid`. Randomized placement uses `seed`.
Field make_initial_data(const InitialData& data, const Grid& grid, std::uint64_t seed);

struct ExperimentConfig {
  std::string experiment;
  std::string run_id;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  Grid grid{1.0, 16};
  bool has_solver = false;
  bool has_initial = false;
  SolverConfig solver;
  bool auto_dt = false;  // dt from default_dt(u0, k) at run time
  double final_time = 1.0;
  double snapshot_interval = 0.1;
  InitialData initial;
  std::vector<WeightSpec> weights;
  json params = json::object();  // experiment-specific, checked by the experiment
  json source;                   // the document as read
  std::shared_ptr<const LineIndex> lines;

  /// Path-aware view of `params` for experiment-specific settings.
  ConfigNode params_node() const;
};

/// Parses and schema-checks a configuration document.
ExperimentConfig parse_config(std::string_view text, const std::string& origin);
ExperimentConfig load_config(const std::filesystem::path& file);

json to_json(const WeightSpec& w);
WeightSpec weight_from_node(const ConfigNode& node);

/// Stable 64-bit FNV-1a hash of the canonical JSON dump.
std::uint64_t config_hash(const json& j);

}  // namespace gkdv
