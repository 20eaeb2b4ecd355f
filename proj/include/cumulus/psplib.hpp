#ifndef CUMULUS_PSPLIB_HPP
#define CUMULUS_PSPLIB_HPP

#include <cctype>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cumulus/engine.hpp"
#include "cumulus/model.hpp"

namespace cumulus::psplib {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

// A single-mode PSPLib .sm instance as read from disk, before modelling.
struct RawInstance {
  int job_count = 0;  // including the dummy source and sink
  int resource_count = 0;
  std::vector<int> capacities;
  struct Job {
    int duration = 0;
    std::vector<int> requests;    // one per renewable resource
    std::vector<int> successors;  // 1-based job numbers
  };
  std::vector<Job> jobs;

  bool operator==(const RawInstance&) const = default;
};

namespace detail {

struct Cursor {
  std::vector<std::string> lines;
  int pos = 0;  // 0-based; reported line numbers are 1-based

  explicit Cursor(std::string_view text) {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) lines.push_back(cur);
  }

  bool done() const { return pos >= static_cast<int>(lines.size()); }
  int lineno() const { return pos + 1; }
  const std::string& line() const { return lines[pos]; }

  bool seek(std::string_view needle) {
    while (!done()) {
      if (lines[pos].find(needle) != std::string::npos) return true;
      ++pos;
    }
    return false;
  }
};

inline std::vector<long long> integers_on_line(const std::string& s) {
  std::vector<long long> out;
  int i = 0;
  const int n = static_cast<int>(s.size());
  while (i < n) {
    if (std::isdigit(static_cast<unsigned char>(s[i])) ||
        (s[i] == '-' && i + 1 < n && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t used = 0;
      out.push_back(std::stoll(s.substr(i), &used));
      i += static_cast<int>(used);
    } else {
      ++i;
    }
  }
  return out;
}

// Last integer on a "name : value" header line.
inline int header_value(Cursor& c, std::string_view key) {
  if (!c.seek(key)) throw ParseError(c.lineno(), "missing header '" + std::string(key) + "'");
  auto ints = integers_on_line(c.line());
  if (ints.empty()) throw ParseError(c.lineno(), "no integer on header line");
  ++c.pos;
  return static_cast<int>(ints.front());
}

}  // namespace detail

// Parses a complete single-mode .sm file.  Sections must appear in the PSPLib
// order; rows are whitespace-tolerant.  Malformed input is reported with the
// offending line number.
inline RawInstance parse_sm(std::string_view text) {
  detail::Cursor c(text);
  RawInstance raw;

  raw.job_count = detail::header_value(c, "jobs (incl.");
  if (raw.job_count < 2) throw ParseError(c.lineno(), "need at least the two dummy jobs");
  raw.resource_count = detail::header_value(c, "- renewable");
  if (raw.resource_count < 1) throw ParseError(c.lineno(), "need at least one renewable resource");
  {
    detail::Cursor probe = c;
    if (probe.seek("- nonrenewable")) {
      auto ints = detail::integers_on_line(probe.line());
      if (!ints.empty() && ints.front() != 0)
        throw ParseError(probe.lineno(), "nonrenewable resources are not supported");
    }
    probe.pos = c.pos;
    if (probe.seek("- doubly constrained")) {
      auto ints = detail::integers_on_line(probe.line());
      if (!ints.empty() && ints.front() != 0)
        throw ParseError(probe.lineno(), "doubly constrained resources are not supported");
    }
  }

  raw.jobs.resize(raw.job_count);

  if (!c.seek("PRECEDENCE RELATIONS:"))
    throw ParseError(c.lineno(), "missing section PRECEDENCE RELATIONS:");
  ++c.pos;  // column header line
  ++c.pos;
  for (int j = 0; j < raw.job_count; ++j, ++c.pos) {
    if (c.done()) throw ParseError(c.lineno(), "unexpected end of file in precedence section");
    auto ints = detail::integers_on_line(c.line());
    if (static_cast<int>(ints.size()) < 3)
      throw ParseError(c.lineno(), "malformed precedence row");
    if (ints[0] != j + 1) throw ParseError(c.lineno(), "unexpected job number in precedence row");
    if (ints[1] != 1) throw ParseError(c.lineno(), "only single-mode instances are supported");
    const int n_succ = static_cast<int>(ints[2]);
    if (static_cast<int>(ints.size()) != 3 + n_succ)
      throw ParseError(c.lineno(), "successor count does not match row");
    for (int k = 0; k < n_succ; ++k) {
      const long long s = ints[3 + k];
      if (s < 1 || s > raw.job_count)
        throw ParseError(c.lineno(), "successor out of range: " + std::to_string(s));
      raw.jobs[j].successors.push_back(static_cast<int>(s));
    }
  }

  if (!c.seek("REQUESTS/DURATIONS:"))
    throw ParseError(c.lineno(), "missing section REQUESTS/DURATIONS:");
  ++c.pos;  // column header line
  ++c.pos;
  if (!c.done() && c.line().find_first_not_of("- \t") == std::string::npos) ++c.pos;
  for (int j = 0; j < raw.job_count; ++j, ++c.pos) {
    if (c.done()) throw ParseError(c.lineno(), "unexpected end of file in requests section");
    auto ints = detail::integers_on_line(c.line());
    if (static_cast<int>(ints.size()) != 3 + raw.resource_count)
      throw ParseError(c.lineno(), "malformed requests/durations row");
    if (ints[0] != j + 1) throw ParseError(c.lineno(), "unexpected job number in requests row");
    if (ints[1] != 1) throw ParseError(c.lineno(), "only single-mode instances are supported");
    if (ints[2] < 0) throw ParseError(c.lineno(), "negative duration");
    raw.jobs[j].duration = static_cast<int>(ints[2]);
    for (int k = 0; k < raw.resource_count; ++k) {
      if (ints[3 + k] < 0) throw ParseError(c.lineno(), "negative resource request");
      raw.jobs[j].requests.push_back(static_cast<int>(ints[3 + k]));
    }
  }

  if (!c.seek("RESOURCEAVAILABILITIES:"))
    throw ParseError(c.lineno(), "missing section RESOURCEAVAILABILITIES:");
  ++c.pos;  // column header line
  ++c.pos;
  if (c.done()) throw ParseError(c.lineno(), "unexpected end of file in availabilities section");
  {
    auto ints = detail::integers_on_line(c.line());
    if (static_cast<int>(ints.size()) != raw.resource_count)
      throw ParseError(c.lineno(), "expected one availability per renewable resource");
    for (long long v : ints) {
      if (v < 0) throw ParseError(c.lineno(), "negative availability");
      raw.capacities.push_back(static_cast<int>(v));
    }
  }

  // Dummy source and sink sanity.
  auto is_dummy = [&](const RawInstance::Job& j) {
    for (int r : j.requests)
      if (r != 0) return false;
    return j.duration == 0;
  };
  if (!is_dummy(raw.jobs.front()) || !is_dummy(raw.jobs.back()))
    throw ParseError(c.lineno(), "first and last job must be zero-duration dummies");

  return raw;
}

// Canonical debug serialization; parse_sm(render(raw)) == raw.
inline std::string render(const RawInstance& raw) {
  std::ostringstream os;
  os << "jobs (incl. supersource/sink ):  " << raw.job_count << "\n";
  os << "RESOURCES\n";
  os << "  - renewable                 :  " << raw.resource_count << "   R\n";
  os << "  - nonrenewable              :  0   N\n";
  os << "  - doubly constrained        :  0   D\n";
  os << "PRECEDENCE RELATIONS:\n";
  os << "jobnr.    #modes  #successors   successors\n";
  os << "\n";
  for (int j = 0; j < raw.job_count; ++j) {
    os << "   " << j + 1 << "   1   " << raw.jobs[j].successors.size();
    for (int s : raw.jobs[j].successors) os << "   " << s;
    os << "\n";
  }
  os << "REQUESTS/DURATIONS:\n";
  os << "jobnr. mode duration";
  for (int k = 0; k < raw.resource_count; ++k) os << "  R " << k + 1;
  os << "\n";
  os << "------------------------------------------------------------------------\n";
  for (int j = 0; j < raw.job_count; ++j) {
    os << "  " << j + 1 << "   1   " << raw.jobs[j].duration;
    for (int r : raw.jobs[j].requests) os << "   " << r;
    os << "\n";
  }
  os << "RESOURCEAVAILABILITIES:\n";
  for (int k = 0; k < raw.resource_count; ++k) os << "  R " << k + 1;
  os << "\n";
  for (int k = 0; k < raw.resource_count; ++k) os << "   " << raw.capacities[k];
  os << "\n";
  return os.str();
}

// Builds the solver model: one start variable per job, one cumulative
// instance per renewable resource, precedences from the successor lists, the
// dummy sink's start as the makespan objective.  Windows are [0, H - p_i]
// where H is the given makespan bound, defaulting to the sum of durations
// (the file's horizon header is ignored).
inline Problem to_problem(const RawInstance& raw, std::optional<int> makespan_ub = {}) {
  int horizon = 0;
  if (makespan_ub) {
    horizon = *makespan_ub;
  } else {
    for (const auto& j : raw.jobs) horizon += j.duration;
  }
  Problem prob;
  for (int k = 0; k < raw.resource_count; ++k) {
    Instance inst;
    inst.capacity = raw.capacities[k];
    inst.horizon = horizon;
    for (int j = 0; j < raw.job_count; ++j) {
      const auto& job = raw.jobs[j];
      inst.activities.push_back(Activity::make(j, job.duration, job.requests[k]));
      if (horizon - job.duration < 0)
        throw ModelError("makespan bound below the duration of job " + std::to_string(j + 1));
      inst.windows.push_back({0, horizon - job.duration});
      for (int s : job.successors) inst.precedences.emplace_back(j, s - 1);
    }
    prob.resources.push_back(std::move(inst));
  }
  prob.objective = raw.job_count - 1;
  validate_problem(prob);
  return prob;
}

// one Instance per resource, as plain cumulative instances
inline std::vector<Instance> to_instances(const RawInstance& raw,
                                          std::optional<int> makespan_ub = {}) {
  return to_problem(raw, makespan_ub).resources;
}

// The five-activity introduction example: processing times 3, 3, 2, 4, 1,
// usages 2, 2, 3, 2, 1, capacity 4, B before D and C before E, everything due
// by period 10.  A zero-duration sink serves as the makespan variable.
inline Problem example1() {
  Instance inst;
  const int p[] = {3, 3, 2, 4, 1};
  const int r[] = {2, 2, 3, 2, 1};
  inst.capacity = 4;
  inst.horizon = 10;
  for (int i = 0; i < 5; ++i) {
    inst.activities.push_back(Activity::make(i, p[i], r[i]));
    inst.windows.push_back({0, 10 - p[i]});
  }
  inst.precedences = {{1, 3}, {2, 4}};
  const int sink = 5;
  inst.activities.push_back(Activity::make(sink, 0, 0));
  inst.windows.push_back({0, 10});
  for (int i = 0; i < 5; ++i) inst.precedences.emplace_back(i, sink);
  Problem prob = make_problem(std::move(inst), sink);
  validate_problem(prob);
  return prob;
}

}  // namespace cumulus::psplib

#endif  // CUMULUS_PSPLIB_HPP
