#include "gkdv/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gkdv {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// JSON has no NaN or inf; they travel as null and as strings.
json number_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error("bad number \"" + s + "\"");
  }
  return j.get<double>();
}

std::string hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string diagnostics_csv(const ExperimentReport& report) {
  std::string out = "run_id,t,name,value,flags\n";
  for (const DiagnosticRow& r : report.rows)
    out += report.run_id + ',' + num(r.t) + ',' + r.name + ',' + num(r.value) + ',' + r.flags + '\n';
  return out;
}

json verdicts_to_json(const std::vector<Verdict>& verdicts) {
  json a = json::array();
  for (const Verdict& v : verdicts) {
    a.push_back({{"clause_id", v.clause_id},
                 {"status", std::string(to_string(v.status))},
                 {"measured", number_json(v.measured)},
                 {"expected", number_json(v.expected)},
                 {"tolerance", number_json(v.tolerance)},
                 {"note", v.note}});
  }
  return a;
}

std::vector<Verdict> verdicts_from_json(const json& j) {
  if (!j.is_array()) throw std::runtime_error("verdicts.json: expected an array");
  std::vector<Verdict> out;
  for (const json& e : j) {
    Verdict v;
    v.clause_id = e.at("clause_id").get<std::string>();
    v.status = verdict_status_from_string(e.at("status").get<std::string>());
    v.measured = number_from_json(e.at("measured"));
    v.expected = number_from_json(e.at("expected"));
    v.tolerance = number_from_json(e.at("tolerance"));
    v.note = e.value("note", "");
    out.push_back(std::move(v));
  }
  return out;
}

std::string format_verdicts(const std::vector<Verdict>& verdicts) {
  std::string out;
  char buf[160];
  for (const Verdict& v : verdicts) {
    std::snprintf(buf, sizeof buf, "%-5s %-12s measured %-12.6g expected %-12.6g tol %-10.3g ", v.clause_id.c_str(),
                  std::string(to_string(v.status)).c_str(), v.measured, v.expected, v.tolerance);
    out += buf + v.note + '\n';
  }
  return out;
}

std::filesystem::path write_run(const ExperimentConfig& cfg, const ExperimentReport& report) {
  namespace fs = std::filesystem;
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);

  std::vector<std::string> files{"manifest.json", "diagnostics.csv", "verdicts.json", "summary.txt"};
  for (const Series& s : report.series) {
    std::string text = "# " + s.x_label + "  " + s.y_label + '\n';
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) text += num(s.x[i]) + ' ' + num(s.y[i]) + '\n';
    write_file(dir / (s.name + ".dat"), text);
    files.push_back(s.name + ".dat");
  }
  write_file(dir / "diagnostics.csv", diagnostics_csv(report));
  write_file(dir / "verdicts.json", verdicts_to_json(report.verdicts).dump(2) + '\n');

  std::string summary = "experiment " + report.experiment + ", run " + report.run_id + '\n';
  for (const std::string& line : report.summary) summary += "  " + line + '\n';
  summary += '\n' + format_verdicts(report.verdicts);
  if (report.verdicts.empty()) summary += "(no verdicts)\n";
  write_file(dir / "summary.txt", summary);

  const TrajectoryFlags& f = report.flags;
  const json manifest = {
      {"experiment", report.experiment},
      {"run_id", report.run_id},
      {"version", kVersion},
      {"seed", cfg.seed},
      {"config_hash", hex(config_hash(cfg.source))},
      {"config", cfg.source},
      {"flags",
       {{"blow_up", f.blow_up},
        {"blow_up_time", number_json(f.blow_up_time)},
        {"boundary_contamination", f.boundary_contamination},
        {"max_edge_ratio", number_json(f.max_edge_ratio)},
        {"datum_tail_ratio", number_json(f.datum_tail_ratio)},
        {"max_tail_ratio", number_json(f.max_tail_ratio)},
        {"under_resolved", f.under_resolved}}},
      {"runtime_seconds", report.runtime_seconds},
      {"exit_code", exit_code(report.verdicts)},
      {"files", files},
  };
  write_file(dir / "manifest.json", manifest.dump(2) + '\n');
  return dir;
}

StoredRun read_run(const std::filesystem::path& dir) {
  StoredRun r;
  try {
    r.manifest = json::parse(read_file(dir / "manifest.json"));
    r.verdicts = verdicts_from_json(json::parse(read_file(dir / "verdicts.json")));
  } catch (const json::exception& e) {
    throw std::runtime_error(dir.string() + ": " + e.what());
  }
  r.summary = read_file(dir / "summary.txt");
  return r;
}

}  // namespace gkdv
