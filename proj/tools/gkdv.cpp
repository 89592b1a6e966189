#include "gkdv/config.hpp"
#include "gkdv/experiments.hpp"
#include "gkdv/output.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>

namespace {

using namespace gkdv;

// Combined status of several runs: errors dominate, then failures, then
// inconclusive results.
int combine(int a, int b) {
  auto rank = [](int c) { return c == 1 ? 3 : c == 2 ? 2 : c == 3 ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

int run_one(const std::string& file, const std::string& output_root, std::mutex& io) {
  try {
    ExperimentConfig cfg = load_config(file);
    if (!output_root.empty()) cfg.output_dir = std::filesystem::path(output_root) / cfg.run_id;
    check_config(cfg);
    const ExperimentReport report = run_experiment(cfg);
    const auto dir = write_run(cfg, report);
    const int code = exit_code(report.verdicts);
    std::lock_guard lock(io);
    std::cout << "== " << report.experiment << " (" << cfg.run_id << ") -> " << dir.string() << '\n';
    for (const std::string& line : report.summary) std::cout << "  " << line << '\n';
    std::cout << format_verdicts(report.verdicts);
    std::cout << "  runtime " << report.runtime_seconds << " s, exit " << code << '\n';
    return code;
  } catch (const ConfigError& e) {
    std::lock_guard lock(io);
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::lock_guard lock(io);
    std::cerr << file << ": " << e.what() << '\n';
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for the generalized KdV equation on a periodic grid"};
  app.require_subcommand(1);

  std::vector<std::string> run_files;
  std::string output_root;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* run = app.add_subcommand("run", "run one or more experiment configs");
  run->add_option("configs", run_files, "config files (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--output-root", output_root, "write each run to <dir>/<run_id> instead of output_dir");
  run->add_option("-j,--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-experiments", "list the available experiments");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "check a config file without running it");
  validate->add_option("config", validate_file, "config file (JSON)")->required()->check(CLI::ExistingFile);

  std::string report_dir;
  auto* report = app.add_subcommand("report", "print the verdicts of a finished run");
  report->add_option("run_dir", report_dir, "run directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*list) {
    for (const auto& e : experiments()) std::cout << e.name << "\n    " << e.description << '\n';
    return 0;
  }
  if (*validate) {
    try {
      const ExperimentConfig cfg = load_config(validate_file);
      check_config(cfg);
      std::cout << validate_file << ": ok (" << cfg.experiment << ", run " << cfg.run_id << ")\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 1;
    }
  }
  if (*report) {
    try {
      const StoredRun r = read_run(report_dir);
      std::cout << r.summary;
      return exit_code(r.verdicts);
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return 1;
    }
  }

  std::mutex io;
  std::vector<int> codes(run_files.size(), 0);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const unsigned workers = std::min<unsigned>(jobs, run_files.size());
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < run_files.size();) codes[i] = run_one(run_files[i], output_root, io);
    });
  }
  for (auto& t : pool) t.join();
  int code = 0;
  for (int c : codes) code = combine(code, c);
  return code;
}
