#ifndef CUMULUS_MODEL_HPP
#define CUMULUS_MODEL_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cumulus/domain.hpp"

namespace cumulus {

// One activity of a cumulative resource: constant duration, usage and energy.
struct Activity {
  int id = 0;
  int duration = 0;  // p_i >= 0
  int usage = 0;     // r_i >= 0
  int energy = 0;    // e_i = p_i * r_i

  static Activity make(int id, int duration, int usage) {
    return Activity{id, duration, usage, duration * usage};
  }
};

// Initial start-time window [est0, lst0].
struct Window {
  int est = 0;
  int lst = 0;
};

// A cumulative resource scheduling instance: one resource of capacity R.
// Multi-resource problems are modelled as several instances sharing activity
// ids, windows and precedences (see engine::Problem).
struct Instance {
  std::vector<Activity> activities;
  int capacity = 0;
  std::vector<std::pair<int, int>> precedences;  // (i, j): S_i + p_i <= S_j
  std::vector<Window> windows;
  int horizon = 0;

  int size() const { return static_cast<int>(activities.size()); }
};

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void validate_instance(const Instance& inst) {
  const int n = inst.size();
  if (static_cast<int>(inst.windows.size()) != n)
    throw ModelError("instance: window count does not match activity count");
  if (inst.capacity < 0) throw ModelError("instance: negative capacity");
  for (int i = 0; i < n; ++i) {
    const Activity& a = inst.activities[i];
    if (a.id != i) throw ModelError("instance: activity ids must be dense");
    if (a.duration < 0 || a.usage < 0) throw ModelError("instance: negative duration or usage");
    if (a.energy != a.duration * a.usage) throw ModelError("instance: energy != p * r");
    if (a.usage > inst.capacity && a.duration > 0)
      throw ModelError("instance: activity " + std::to_string(i) +
                       " needs more than the capacity; infeasible");
    const Window& w = inst.windows[i];
    if (w.est > w.lst) throw ModelError("instance: empty window for activity " + std::to_string(i));
    if (w.lst + a.duration > inst.horizon)
      throw ModelError("instance: activity " + std::to_string(i) + " exceeds the horizon");
  }
  // Precedence graph must be acyclic (Kahn).
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> succ(n);
  for (auto [i, j] : inst.precedences) {
    if (i < 0 || i >= n || j < 0 || j >= n) throw ModelError("instance: precedence out of range");
    succ[i].push_back(j);
    ++indeg[j];
  }
  std::vector<int> queue;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) queue.push_back(i);
  int seen = 0;
  while (!queue.empty()) {
    int i = queue.back();
    queue.pop_back();
    ++seen;
    for (int j : succ[i])
      if (--indeg[j] == 0) queue.push_back(j);
  }
  if (seen != n) throw ModelError("instance: precedence graph is cyclic");
}

// Creates a domain store with one start variable per activity, over the
// initial windows.
inline DomainStore make_domains(const Instance& inst) {
  DomainStore d;
  for (int i = 0; i < inst.size(); ++i) d.add_start(inst.windows[i].est, inst.windows[i].lst);
  return d;
}

// est, lst, ect, lct of an activity under the current bounds.
struct TaskBounds {
  int est = 0;
  int lst = 0;
  int ect = 0;
  int lct = 0;
};

inline TaskBounds derived_bounds(const Instance& inst, int i, const DomainStore& d) {
  const int p = inst.activities[i].duration;
  return TaskBounds{d.lb(i), d.ub(i), d.lb(i) + p, d.ub(i) + p};
}

// Free/fixed split of an activity: the compulsory part [lst, ect) carries the
// fixed energy, the remainder is free.
struct FreeFixedSplit {
  int p_fixed = 0;   // pTT = max(0, ect - lst)
  int e_fixed = 0;   // eTT = r * pTT
  int p_free = 0;    // pEF = p - pTT
  int e_free = 0;    // eEF = e - eTT
  int lst_free = 0;  // lstEF = lct - pEF
};

inline FreeFixedSplit free_fixed_split(const Instance& inst, int i, const DomainStore& d) {
  const Activity& a = inst.activities[i];
  const TaskBounds b = derived_bounds(inst, i, d);
  FreeFixedSplit s;
  s.p_fixed = std::max(0, b.ect - b.lst);
  s.e_fixed = a.usage * s.p_fixed;
  s.p_free = a.duration - s.p_fixed;
  s.e_free = a.energy - s.e_fixed;
  s.lst_free = b.lct - s.p_free;
  return s;
}

inline bool has_free_part(const Instance& inst, int i, const DomainStore& d) {
  const Activity& a = inst.activities[i];
  if (a.duration <= 0 || a.usage <= 0) return false;
  return free_fixed_split(inst, i, d).p_free > 0;
}

// Membership in the task interval V^EF(a, b) for the window [begin, end).
inline bool in_task_interval(const Instance& inst, int i, int begin, int end,
                             const DomainStore& d) {
  if (!has_free_part(inst, i, d)) return false;
  const TaskBounds b = derived_bounds(inst, i, d);
  return begin <= b.est && b.lct <= end;
}

// The considered length p_i(a, b) of activity i in the window [begin, end):
// the whole duration for members of V^EF(a, b); the forced right-shifted part
// for free activities starting in the window but ending beyond it; otherwise
// the overlap of the compulsory part with the window.  Always in [0, p_i].
inline int window_length(const Instance& inst, int i, int begin, int end, const DomainStore& d) {
  const Activity& a = inst.activities[i];
  if (a.duration <= 0 || a.usage <= 0) return 0;
  const TaskBounds b = derived_bounds(inst, i, d);
  if (has_free_part(inst, i, d) && begin <= b.est) {
    if (b.lct <= end) return a.duration;
    return std::max(0, end - b.lst);
  }
  return std::max(0, std::min(end, b.ect) - std::max(begin, b.lst));
}

inline int window_energy(const Instance& inst, int i, int begin, int end, const DomainStore& d) {
  return inst.activities[i].usage * window_length(inst, i, begin, end, d);
}

}  // namespace cumulus

#endif  // CUMULUS_MODEL_HPP
