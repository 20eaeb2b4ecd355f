#ifndef CUMULUS_RUNNER_HPP
#define CUMULUS_RUNNER_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cumulus/psplib.hpp"
#include "cumulus/report.hpp"

namespace cumulus {

struct RunOptions {
  SolveMode mode = SolveMode::Ub;
  SolverConfig config;
  int jobs = 1;
};

inline Problem load_problem(const std::string& path_or_builtin) {
  if (path_or_builtin == "@example1") return psplib::example1();
  std::ifstream in(path_or_builtin);
  if (!in) throw std::runtime_error("cannot read file: " + path_or_builtin);
  std::stringstream ss;
  ss << in.rdbuf();
  return psplib::to_problem(psplib::parse_sm(ss.str()));
}

inline std::string instance_name(const std::string& path_or_builtin) {
  if (path_or_builtin == "@example1") return "example1";
  return std::filesystem::path(path_or_builtin).filename().string();
}

// Solves one instance path (or @example1) and reports; model and parse errors
// become status "error" with the message kept for the caller.
inline RunReport run_one(const std::string& path, const RunOptions& opt) {
  RunReport r;
  r.instance = instance_name(path);
  r.mode = opt.mode;
  r.prop = opt.config.prop;
  r.seed = opt.config.seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Problem prob = load_problem(path);
    SolverConfig cfg = opt.config;
    cfg.mode = opt.mode;
    Solver solver(prob, cfg);
    const SolveResult res = solver.solve();
    r.status = to_string(res.status);
    if (res.value) r.value = *res.value;
    r.failures = res.stats.failures;
    r.decisions = res.stats.decisions;
  } catch (const std::exception& e) {
    r.status = "error";
    r.error = e.what();
  }
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Runs a batch with a bounded worker pool; reports come back in input order
// regardless of the number of workers.
inline std::vector<RunReport> run_batch(const std::vector<std::string>& paths,
                                        const RunOptions& opt) {
  std::vector<RunReport> reports(paths.size());
  const int workers = std::max(1, std::min<int>(opt.jobs, static_cast<int>(paths.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < paths.size(); ++i) reports[i] = run_one(paths[i], opt);
    return reports;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= paths.size()) return;
        reports[i] = run_one(paths[i], opt);
      }
    });
  for (std::thread& t : pool) t.join();
  return reports;
}

// Benchmark harness: every .sm file in the directory under each requested
// configuration, aggregated per configuration.
inline std::vector<BenchRow> bench_directory(const std::string& dir,
                                             const std::vector<PropLevel>& props,
                                             const RunOptions& base_opt,
                                             std::vector<std::vector<RunReport>>* raw = nullptr) {
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".sm")
      paths.push_back(entry.path().string());
  std::ranges::sort(paths);
  if (paths.empty()) throw std::runtime_error("no .sm instances in directory: " + dir);

  std::vector<std::vector<RunReport>> per_config;
  for (PropLevel p : props) {
    RunOptions opt = base_opt;
    opt.config.prop = p;
    per_config.push_back(run_batch(paths, opt));
  }

  auto solved = [](const RunReport& r) { return r.status == "optimal"; };
  std::vector<bool> common(paths.size(), true);
  for (const auto& reports : per_config)
    for (std::size_t i = 0; i < reports.size(); ++i)
      if (!solved(reports[i])) common[i] = false;

  std::vector<BenchRow> rows;
  for (std::size_t k = 0; k < props.size(); ++k) {
    BenchRow row;
    row.prop = to_string(props[k]);
    double c_sec = 0, c_fail = 0, a_sec = 0, a_fail = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const RunReport& r = per_config[k][i];
      if (solved(r)) ++row.solved;
      if (common[i]) {
        ++row.common;
        c_sec += r.seconds;
        c_fail += static_cast<double>(r.failures);
      }
      a_sec += r.seconds;
      a_fail += static_cast<double>(r.failures);
    }
    if (row.common > 0) {
      row.common_mean_seconds = c_sec / row.common;
      row.common_mean_failures = c_fail / row.common;
    }
    row.all_mean_seconds = a_sec / static_cast<double>(paths.size());
    row.all_mean_failures = a_fail / static_cast<double>(paths.size());
    rows.push_back(row);
  }
  if (raw) *raw = std::move(per_config);
  return rows;
}

}  // namespace cumulus

#endif  // CUMULUS_RUNNER_HPP
