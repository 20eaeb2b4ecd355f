#ifndef CUMULUS_ORACLE_HPP
#define CUMULUS_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cumulus/model.hpp"

namespace cumulus::oracle {

struct EnumLimits {
  int max_activities = 6;
  int max_horizon = 15;
  int max_capacity = 4;
  std::int64_t node_budget = 2'000'000;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Disjunction pairs as the engine derives them: both activities have positive
// duration and cannot run concurrently.
inline std::vector<std::pair<int, int>> disjunction_pairs(const Instance& inst) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < inst.size(); ++i)
    for (int j = i + 1; j < inst.size(); ++j) {
      const Activity &a = inst.activities[i], &b = inst.activities[j];
      if (a.duration > 0 && b.duration > 0 && a.usage + b.usage > inst.capacity)
        pairs.emplace_back(i, j);
    }
  return pairs;
}

inline bool schedule_feasible(const Instance& inst, const std::vector<int>& start) {
  for (auto [i, j] : inst.precedences)
    if (start[i] + inst.activities[i].duration > start[j]) return false;
  int lo = start.empty() ? 0 : *std::ranges::min_element(start);
  int hi = lo;
  for (int i = 0; i < inst.size(); ++i)
    hi = std::max(hi, start[i] + inst.activities[i].duration);
  for (int t = lo; t < hi; ++t) {
    int used = 0;
    for (int i = 0; i < inst.size(); ++i) {
      const Activity& a = inst.activities[i];
      if (a.usage > 0 && start[i] <= t && t < start[i] + a.duration) used += a.usage;
    }
    if (used > inst.capacity) return false;
  }
  for (auto [i, j] : disjunction_pairs(inst)) {
    if (start[i] + inst.activities[i].duration <= start[j]) continue;
    if (start[j] + inst.activities[j].duration <= start[i]) continue;
    return false;
  }
  return true;
}

// All start vectors within the given bounds that satisfy precedences, the
// disjunctions and the pointwise capacity condition.  Refuses (rather than
// truncating) when the candidate space exceeds the node budget.
inline std::vector<std::vector<int>> enumerate_feasible(
    const Instance& inst, const std::vector<std::pair<int, int>>& bounds,
    const EnumLimits& limits = {}) {
  const int n = inst.size();
  if (n > limits.max_activities + 1)  // +1 allows an appended makespan sink
    throw BudgetExceeded("enumerate_feasible: too many activities");
  if (inst.horizon > limits.max_horizon * 3)
    throw BudgetExceeded("enumerate_feasible: horizon too large");
  std::int64_t space = 1;
  for (auto [lo, hi] : bounds) {
    space *= (hi - lo + 1);
    if (space > limits.node_budget) throw BudgetExceeded("enumerate_feasible: budget exceeded");
  }

  std::vector<std::vector<int>> out;
  std::vector<int> start(n, 0);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      if (schedule_feasible(inst, start)) out.push_back(start);
      return;
    }
    for (int v = bounds[i].first; v <= bounds[i].second; ++v) {
      start[i] = v;
      bool ok = true;
      for (auto [p, q] : inst.precedences) {  // prune on assigned prefixes
        if (q == i && p < i && start[p] + inst.activities[p].duration > v) ok = false;
        if (p == i && q < i && v + inst.activities[i].duration > start[q]) ok = false;
      }
      if (ok) self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

inline std::vector<std::vector<int>> enumerate_feasible(const Instance& inst,
                                                        const DomainStore& d,
                                                        const EnumLimits& limits = {}) {
  return enumerate_feasible(inst, d.start_bounds(), limits);
}

// energy(a, b) by direct summation of its three terms; the equivalence oracle
// for the TTEF consistency check.
struct EnergyDecomposition {
  std::int64_t free_energy = 0;   // sum of eEF over V^EF(a, b)
  std::int64_t fixed_energy = 0;  // ttEn(a, b)
  std::int64_t shifted_energy = 0;  // rsEn(a, b)
  std::int64_t total() const { return free_energy + fixed_energy + shifted_energy; }
};

inline EnergyDecomposition naive_energy(const Instance& inst, const DomainStore& d, int begin,
                                        int end) {
  EnergyDecomposition out;
  for (int i = 0; i < inst.size(); ++i) {
    const Activity& a = inst.activities[i];
    if (a.duration <= 0 || a.usage <= 0) continue;
    const TaskBounds b = derived_bounds(inst, i, d);
    for (int t = std::max(begin, b.lst); t < std::min(end, b.ect); ++t) out.fixed_energy += a.usage;
    const FreeFixedSplit s = free_fixed_split(inst, i, d);
    if (s.p_free <= 0) continue;
    if (begin <= b.est && b.lct <= end)
      out.free_energy += s.e_free;
    else if (begin <= b.est)
      out.shifted_energy += static_cast<std::int64_t>(a.usage) * std::max(0, end - s.lst_free);
  }
  return out;
}

// Direct all-pairs overload test over the task-interval windows of V^EF.
inline bool naive_ttef_overload(const Instance& inst, const DomainStore& d) {
  std::vector<int> free_ids;
  for (int i = 0; i < inst.size(); ++i)
    if (has_free_part(inst, i, d)) free_ids.push_back(i);
  for (int a : free_ids)
    for (int b : free_ids) {
      const int begin = derived_bounds(inst, a, d).est;
      const int end = derived_bounds(inst, b, d).lct;
      if (begin >= end) continue;
      if (naive_energy(inst, d, begin, end).total() >
          static_cast<std::int64_t>(inst.capacity) * (end - begin))
        return true;
    }
  return false;
}

// --- Explanation validity -------------------------------------------------

// Minimal overlap of activity i with [begin, end) when S_i ranges over
// [lb, ub]: the overlap is unimodal in the start, so the extremes suffice.
inline int min_overlap(int p, int begin, int end, int lb, int ub) {
  auto overlap = [&](int s) { return std::max(0, std::min(end, s + p) - std::max(begin, s)); };
  return std::min(overlap(lb), overlap(ub));
}

struct CheckReport {
  bool valid = true;
  std::string note;  // violating placement, for failures
};

// Validates an energetic explanation: under the antecedent bounds alone, the
// minimal overlaps must overload the window (FAIL clauses), and every
// placement of u on the pruned side must force such an overload (updates).
// Explanations without window metadata are vacuously accepted.
inline CheckReport check_explanation(const Instance& inst, const Explanation& expl) {
  const ExplInfo& info = expl.info;
  if (info.kind == ExplInfo::Kind::None) return {};

  const int n = inst.size();
  std::vector<int> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = inst.windows[i].est;
    hi[i] = inst.windows[i].lst;
  }
  auto apply = [&](const Lit& l) {
    if (l.kind == LitKind::StartGe)
      lo[l.var] = std::max(lo[l.var], l.value);
    else if (l.kind == LitKind::StartLe)
      hi[l.var] = std::min(hi[l.var], l.value);
  };
  for (const Lit& l : expl.antecedents) apply(l);

  const std::int64_t cap = static_cast<std::int64_t>(inst.capacity) * (info.end - info.begin);
  std::int64_t fixed_sum = 0;
  for (int i = 0; i < n; ++i) {
    if (i == info.task) continue;
    fixed_sum += static_cast<std::int64_t>(inst.activities[i].usage) *
                 min_overlap(inst.activities[i].duration, info.begin, info.end, lo[i], hi[i]);
  }

  if (info.kind == ExplInfo::Kind::Overload) {
    std::int64_t total = fixed_sum;
    if (info.task >= 0)
      total += static_cast<std::int64_t>(inst.activities[info.task].usage) *
               min_overlap(inst.activities[info.task].duration, info.begin, info.end,
                           lo[info.task], hi[info.task]);
    if (total > cap) return {};
    return {false, "overload clause: minimal energy " + std::to_string(total) +
                       " does not exceed " + std::to_string(cap)};
  }

  // Update clause: every placement of u on the removed side must overload.
  const int u = info.task;
  const Activity& au = inst.activities[u];
  int from, to;
  if (info.kind == ExplInfo::Kind::UpdateLb) {
    from = lo[u];
    to = std::min(hi[u], info.new_bound - 1);
  } else {
    from = std::max(lo[u], info.new_bound + 1);
    to = hi[u];
  }
  for (int s = from; s <= to; ++s) {
    const std::int64_t ov = std::max(0, std::min(info.end, s + au.duration) - std::max(info.begin, s));
    if (fixed_sum + static_cast<std::int64_t>(au.usage) * ov <= cap)
      return {false, "update clause: placement S_" + std::to_string(u) + " = " +
                         std::to_string(s) + " does not overload the window"};
  }
  return {};
}

// --- Random instances ------------------------------------------------------

// Generator for the property corpora: n in [2,6], p in [0,4], r in [0,R],
// R in [1,4], precedence density 0.2; windows kept inside the enumeration
// budget.  Deterministic per seed.
inline Instance random_instance(std::uint64_t seed, const EnumLimits& limits = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  for (;;) {
    Instance inst;
    const int n = pick(2, 6);
    inst.capacity = pick(1, limits.max_capacity);
    const int horizon = pick(5, std::min(limits.max_horizon, 12));
    inst.horizon = horizon;
    bool ok = true;
    std::int64_t space = 1;
    for (int i = 0; i < n; ++i) {
      const int p = pick(0, 4);
      int r = p > 0 ? pick(0, inst.capacity) : 0;
      if (p + 0 > horizon) {
        ok = false;
        break;
      }
      const int est = pick(0, horizon - p);
      const int lst = pick(est, horizon - p);
      inst.activities.push_back(Activity::make(i, p, r));
      inst.windows.push_back({est, lst});
      space *= (lst - est + 1);
    }
    if (!ok || space > limits.node_budget / 16) continue;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 10 < 2) {
          // only keep precedences the windows can satisfy
          if (inst.windows[i].est + inst.activities[i].duration <= inst.windows[j].lst)
            inst.precedences.emplace_back(i, j);
        }
    try {
      validate_instance(inst);
    } catch (const ModelError&) {
      continue;
    }
    return inst;
  }
}

// Appends a zero-duration sink preceded by every activity; its start variable
// is the makespan objective.
inline Instance with_makespan_sink(Instance inst) {
  const int n = inst.size();
  int lb = 0;
  for (int i = 0; i < n; ++i) {
    lb = std::max(lb, inst.windows[i].est + inst.activities[i].duration);
    inst.precedences.emplace_back(i, n);
  }
  inst.activities.push_back(Activity::make(n, 0, 0));
  inst.windows.push_back({lb, inst.horizon});
  return inst;
}

}  // namespace cumulus::oracle

#endif  // CUMULUS_ORACLE_HPP
