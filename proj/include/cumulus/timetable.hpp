#ifndef CUMULUS_TIMETABLE_HPP
#define CUMULUS_TIMETABLE_HPP

#include <algorithm>
#include <cassert>
#include <optional>
#include <vector>

#include "cumulus/model.hpp"
#include "cumulus/profile.hpp"

namespace cumulus {

namespace detail {

// Greedy pick of profile contributors covering time t until their usage sum
// exceeds the threshold: larger r_i first, ties by smaller id.
inline std::vector<int> greedy_contributors(const Instance& inst, const DomainStore& d, int t,
                                            int threshold, int skip = -1) {
  std::vector<int> cover;
  for (int i = 0; i < inst.size(); ++i) {
    if (i == skip) continue;
    const Activity& a = inst.activities[i];
    if (a.duration <= 0 || a.usage <= 0) continue;
    const TaskBounds b = derived_bounds(inst, i, d);
    if (b.lst <= t && t < b.ect) cover.push_back(i);
  }
  std::ranges::sort(cover, [&](int i, int j) {
    int ri = inst.activities[i].usage, rj = inst.activities[j].usage;
    return ri != rj ? ri > rj : i < j;
  });
  std::vector<int> picked;
  int sum = 0;
  for (int i : cover) {
    if (sum > threshold) break;
    picked.push_back(i);
    sum += inst.activities[i].usage;
  }
  assert(sum > threshold);
  return picked;
}

// Literal pair stating that i's compulsory part covers t.
inline void push_cover_literals(const Instance& inst, const DomainStore& d, std::vector<Lit>& out,
                                int i, int t) {
  d.push_antecedent(out, Lit::start_ge(i, t - inst.activities[i].duration + 1));
  d.push_antecedent(out, Lit::start_le(i, t));
}

}  // namespace detail

// Phase (a): conflict iff some profile segment exceeds the capacity.  The
// failure is explained pointwise at the first overloaded segment's begin.
inline std::optional<Explanation> tt_check(const Instance& inst, const DomainStore& d,
                                           const ResourceProfile& profile) {
  for (const ProfileSegment& s : profile.segments()) {
    if (s.height <= inst.capacity) continue;
    const int t = s.begin;
    Explanation e;
    for (int i : detail::greedy_contributors(inst, d, t, inst.capacity))
      detail::push_cover_literals(inst, d, e.antecedents, i, t);
    e.info = {ExplInfo::Kind::Overload, t, t + 1, -1, 0, -1, 0};
    return e;
  }
  return std::nullopt;
}

// Phase (c): time-table filtering of start-time bounds against the profile.
// Updates are committed immediately; pushes are stepwise and pointwise, each
// explained at the single time unit [newBound - 1, newBound) (lower bounds)
// or [t, t + 1) (upper bounds), which keeps every explanation checkable by
// the energetic validity oracle.
inline FilterResult tt_filter(const Instance& inst, DomainStore& d,
                              const ResourceProfile& profile) {
  FilterResult res;
  const auto segs = profile.segments();
  for (int u = 0; u < inst.size(); ++u) {
    const Activity& act = inst.activities[u];
    if (act.duration <= 0 || act.usage <= 0 || d.is_fixed(u)) continue;
    if (profile.empty()) break;

    // Lower bound: walk segments left to right until a gap fits.
    for (std::size_t k = 0; k < segs.size();) {
      const ProfileSegment& s = segs[k];
      const int lb = d.lb(u), ect = lb + act.duration;
      if (s.begin >= ect) break;
      if (s.end <= lb || s.height + act.usage <= inst.capacity) {
        ++k;
        continue;
      }
      const TaskBounds b = derived_bounds(inst, u, d);
      if (b.lst < b.ect && b.lst <= s.begin && s.end <= b.ect) {
        ++k;  // u's own compulsory part saturates this segment
        continue;
      }
      const int push_to = std::min(ect, s.end);
      Explanation e;
      d.push_antecedent(e.antecedents, Lit::start_ge(u, push_to - act.duration));
      for (int j : detail::greedy_contributors(inst, d, push_to - 1, inst.capacity - act.usage, u))
        detail::push_cover_literals(inst, d, e.antecedents, j, push_to - 1);
      e.consequent = Lit::start_ge(u, push_to);
      e.info = {ExplInfo::Kind::UpdateLb, push_to - 1, push_to, u, push_to, -1, act.usage};
      switch (d.set_lb(u, push_to, std::move(e))) {
        case SetResult::Conflict:
          res.conflicted = true;
          return res;
        case SetResult::Changed:
          res.changed = true;
          break;
        case SetResult::Unchanged:
          break;
      }
      if (push_to >= s.end) ++k;  // else re-check the same segment with the new bound
    }

    // Upper bound: mirror walk, right to left.
    for (std::size_t k = segs.size(); k-- > 0;) {
      const ProfileSegment& s = segs[k];
      const int ub = d.ub(u);
      if (s.end <= ub) break;
      if (s.begin >= ub + act.duration || s.height + act.usage <= inst.capacity) continue;
      const TaskBounds b = derived_bounds(inst, u, d);
      if (b.lst < b.ect && b.lst <= s.begin && s.end <= b.ect) continue;
      const int t = std::max(s.begin, ub);
      Explanation e;
      d.push_antecedent(e.antecedents, Lit::start_le(u, t));
      for (int j : detail::greedy_contributors(inst, d, t, inst.capacity - act.usage, u))
        detail::push_cover_literals(inst, d, e.antecedents, j, t);
      e.consequent = Lit::start_le(u, t - act.duration);
      e.info = {ExplInfo::Kind::UpdateUb, t, t + 1, u, t - act.duration, -1, act.usage};
      switch (d.set_ub(u, t - act.duration, std::move(e))) {
        case SetResult::Conflict:
          res.conflicted = true;
          return res;
        case SetResult::Changed:
          res.changed = true;
          break;
        case SetResult::Unchanged:
          break;
      }
      if (t > s.begin) ++k;  // re-check the same segment with the new bound
    }
  }
  return res;
}

}  // namespace cumulus

#endif  // CUMULUS_TIMETABLE_HPP
