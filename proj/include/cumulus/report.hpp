#ifndef CUMULUS_REPORT_HPP
#define CUMULUS_REPORT_HPP

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "cumulus/engine.hpp"

namespace cumulus {

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Feasible:
      return "feasible";
    case SolveStatus::LowerBound:
      return "lower_bound";
    case SolveStatus::Unknown:
      return "unknown";
    case SolveStatus::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

inline std::string to_string(SolveMode m) { return m == SolveMode::Ub ? "ub" : "lb"; }

inline std::string to_string(PropLevel p) {
  switch (p) {
    case PropLevel::Tt:
      return "tt";
    case PropLevel::TtefCheck:
      return "ttefc";
    case PropLevel::Ttef:
      return "ttef";
  }
  return "ttef";
}

inline std::optional<PropLevel> prop_level_from(const std::string& s) {
  if (s == "tt") return PropLevel::Tt;
  if (s == "ttefc") return PropLevel::TtefCheck;
  if (s == "ttef") return PropLevel::Ttef;
  return std::nullopt;
}

// One solved (or failed) instance.  Wall time is reported coarsely, at a
// tenth of a second, so that reports of repeated runs compare byte-equal.
struct RunReport {
  std::string instance;
  SolveMode mode = SolveMode::Ub;
  PropLevel prop = PropLevel::Ttef;
  std::string status = "unknown";
  std::optional<long long> value;
  long long failures = 0;
  long long decisions = 0;
  double seconds = 0.0;
  std::uint64_t seed = 0;
  std::string error;  // non-empty for status "error"; goes to stderr, not CSV
};

inline std::string format_seconds(double s, int digits = 1) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, s);
  return buf;
}

inline std::string csv_header() {
  return "instance,mode,prop,status,value,failures,decisions,seconds,seed";
}

inline std::string to_csv_row(const RunReport& r) {
  std::string out;
  out += r.instance;
  out += ',';
  out += to_string(r.mode);
  out += ',';
  out += to_string(r.prop);
  out += ',';
  out += r.status;
  out += ',';
  if (r.value) out += std::to_string(*r.value);
  out += ',';
  out += std::to_string(r.failures);
  out += ',';
  out += std::to_string(r.decisions);
  out += ',';
  out += format_seconds(r.seconds);
  out += ',';
  out += std::to_string(r.seed);
  return out;
}

inline std::string to_csv(const std::vector<RunReport>& reports) {
  std::string out = csv_header();
  out += '\n';
  for (const RunReport& r : reports) {
    out += to_csv_row(r);
    out += '\n';
  }
  return out;
}

// Aggregates in the spirit of the usual benchmark tables: per configuration
// the number solved, then mean runtime and mean failures over the instances
// solved by every configuration, then the same means over all instances
// (failures at the time limit for unsolved ones).
struct BenchRow {
  std::string prop;
  int solved = 0;
  int common = 0;
  double common_mean_seconds = 0.0;
  double common_mean_failures = 0.0;
  double all_mean_seconds = 0.0;
  double all_mean_failures = 0.0;
};

inline std::string bench_csv_header() {
  return "prop,solved,common_count,common_mean_seconds,common_mean_failures,"
         "all_mean_seconds,all_mean_failures";
}

inline std::string to_csv_row(const BenchRow& r) {
  std::string out;
  out += r.prop;
  out += ',';
  out += std::to_string(r.solved);
  out += ',';
  out += std::to_string(r.common);
  out += ',';
  out += format_seconds(r.common_mean_seconds, 3);
  out += ',';
  out += format_seconds(r.common_mean_failures, 1);
  out += ',';
  out += format_seconds(r.all_mean_seconds, 3);
  out += ',';
  out += format_seconds(r.all_mean_failures, 1);
  return out;
}

inline std::string to_csv(const std::vector<BenchRow>& rows) {
  std::string out = bench_csv_header();
  out += '\n';
  for (const BenchRow& r : rows) {
    out += to_csv_row(r);
    out += '\n';
  }
  return out;
}

}  // namespace cumulus

#endif  // CUMULUS_REPORT_HPP
