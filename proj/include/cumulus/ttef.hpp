#ifndef CUMULUS_TTEF_HPP
#define CUMULUS_TTEF_HPP

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

#include "cumulus/model.hpp"
#include "cumulus/profile.hpp"

namespace cumulus {

// A bound update postponed until the end of a TTEF scan (Alg. 2 keeps the
// strongest bound found per activity and commits once the loops finish).
struct PendingUpdate {
  int task = -1;
  bool is_lb = true;
  int new_bound = 0;
  Explanation reason;
};

namespace detail {

inline int ceil_div(std::int64_t a, std::int64_t b) {
  assert(b > 0);
  return static_cast<int>(a >= 0 ? (a + b - 1) / b : a / b);
}

// View of the instance in forward or reflected time.  Reflection about the
// horizon (S' = H - S - p) turns upper-bound filtering into lower-bound
// filtering on the mirrored instance; literals and windows map back through
// this frame.  Compulsory parts and free parts are invariant under the map.
struct Frame {
  const Instance& inst;
  const DomainStore& dom;
  const ResourceProfile& profile;
  bool reflected = false;

  int horizon() const { return inst.horizon; }

  int view_est(int i) const {
    const int p = inst.activities[i].duration;
    return reflected ? horizon() - (dom.ub(i) + p) : dom.lb(i);
  }
  int view_lst(int i) const {
    const int p = inst.activities[i].duration;
    return reflected ? horizon() - (dom.lb(i) + p) : dom.ub(i);
  }

  std::int64_t tt_energy(int begin, int end) const {
    return reflected ? profile.tt_energy(horizon() - end, horizon() - begin)
                     : profile.tt_energy(begin, end);
  }

  // [[v <= S'_i]] in view coordinates, as a literal on the real variable.
  Lit lit_ge(int i, int v) const {
    if (!reflected) return Lit::start_ge(i, v);
    return Lit::start_le(i, horizon() - inst.activities[i].duration - v);
  }
  // [[S'_i <= v]] in view coordinates.
  Lit lit_le(int i, int v) const {
    if (!reflected) return Lit::start_le(i, v);
    return Lit::start_ge(i, horizon() - inst.activities[i].duration - v);
  }

  std::pair<int, int> real_window(int begin, int end) const {
    if (!reflected) return {begin, end};
    return {horizon() - end, horizon() - begin};
  }
};

struct ScanTask {
  int id = -1;
  int est = 0, lst = 0;
  int p = 0, r = 0;
  int lct = 0;
  int e_free = 0;
  int lst_free = 0;
};

// The activities of V^EF under the frame's bounds.
inline std::vector<ScanTask> collect_free_tasks(const Frame& f) {
  std::vector<ScanTask> out;
  for (int i = 0; i < f.inst.size(); ++i) {
    const Activity& a = f.inst.activities[i];
    if (a.duration <= 0 || a.usage <= 0) continue;
    ScanTask t;
    t.id = i;
    t.est = f.view_est(i);
    t.lst = f.view_lst(i);
    t.p = a.duration;
    t.r = a.usage;
    t.lct = t.lst + t.p;
    const int p_fixed = std::max(0, (t.est + t.p) - t.lst);
    const int p_free = t.p - p_fixed;
    if (p_free <= 0) continue;
    t.e_free = a.energy - a.usage * p_fixed;
    t.lst_free = t.lct - p_free;
    out.push_back(t);
  }
  return out;
}

// p_i(a, b) under the frame's bounds; see model::window_length.
inline int view_window_length(const Frame& f, int i, int begin, int end) {
  const Activity& a = f.inst.activities[i];
  if (a.duration <= 0 || a.usage <= 0) return 0;
  const int est = f.view_est(i), lst = f.view_lst(i);
  const int ect = est + a.duration, lct = lst + a.duration;
  const bool free_part = a.duration - std::max(0, ect - lst) > 0;
  if (free_part && begin <= est) {
    if (lct <= end) return a.duration;
    return std::max(0, end - lst);
  }
  return std::max(0, std::min(end, ect) - std::max(begin, lst));
}

struct WidenItem {
  int id;
  int p_ab;
  int delta = 0;
  bool free_part;
};

// Greedy allocation of the widening budget: free-part activities first, then
// fixed ones; within a class by descending usage, ties by ascending id.
inline void allocate_widening(const Frame& f, std::vector<WidenItem>& items, std::int64_t delta) {
  std::ranges::sort(items, [&](const WidenItem& x, const WidenItem& y) {
    if (x.free_part != y.free_part) return x.free_part;
    const int rx = f.inst.activities[x.id].usage, ry = f.inst.activities[y.id].usage;
    if (rx != ry) return rx > ry;
    return x.id < y.id;
  });
  for (WidenItem& it : items) {
    if (delta <= 0) break;
    const int r = f.inst.activities[it.id].usage;
    it.delta = static_cast<int>(std::min<std::int64_t>(delta / r, it.p_ab));
    delta -= static_cast<std::int64_t>(it.delta) * r;
  }
}

inline void push_widened_pair(const Frame& f, std::vector<Lit>& out, const WidenItem& it, int begin,
                              int end) {
  const Activity& a = f.inst.activities[it.id];
  f.dom.push_antecedent(out, f.lit_ge(it.id, begin + it.p_ab - a.duration - it.delta));
  f.dom.push_antecedent(out, f.lit_le(it.id, end - it.p_ab + it.delta));
}

// Overload explanation for the window [begin, end) (view coordinates): each
// involved activity only needs p_i(a,b) - delta_i time units inside the
// window, where the deltas spend the surplus energy of the overload.
inline Explanation explain_overload(const Frame& f, int begin, int end) {
  std::vector<WidenItem> items;
  std::int64_t total = 0;
  for (int i = 0; i < f.inst.size(); ++i) {
    const int len = view_window_length(f, i, begin, end);
    if (len <= 0) continue;
    const Activity& a = f.inst.activities[i];
    const int est = f.view_est(i), lst = f.view_lst(i);
    const bool free_part = a.duration - std::max(0, est + a.duration - lst) > 0;
    items.push_back({i, len, 0, free_part});
    total += static_cast<std::int64_t>(a.usage) * len;
  }
  const std::int64_t delta =
      total - static_cast<std::int64_t>(f.inst.capacity) * (end - begin) - 1;
  assert(delta >= 0 && "explain_overload: window is not overloaded");
  allocate_widening(f, items, delta);

  Explanation e;
  for (const WidenItem& it : items)
    if (it.p_ab - it.delta > 0) push_widened_pair(f, e.antecedents, it, begin, end);
  const auto [rb, re] = f.real_window(begin, end);
  e.info = {ExplInfo::Kind::Overload, rb, re, -1, 0, static_cast<int>(delta), 0};
  return e;
}

// Explanation for pruning u's (view) lower bound to new_lb using the window
// [begin, end).  u's own literal is relaxed as far as the propagation still
// holds; the widening budget for the others is what the rounding in new_lb
// left over, which is always in [0, r_u).
inline Explanation explain_update(const Frame& f, int begin, int end, int u, int new_lb,
                                  std::int64_t rest) {
  const Activity& au = f.inst.activities[u];
  const std::int64_t delta =
      rest - static_cast<std::int64_t>(au.usage) * (new_lb - begin - 1) - 1;
  assert(delta >= 0 && delta < au.usage);

  std::vector<WidenItem> items;
  for (int i = 0; i < f.inst.size(); ++i) {
    if (i == u) continue;
    const int len = view_window_length(f, i, begin, end);
    if (len <= 0) continue;
    const Activity& a = f.inst.activities[i];
    const int est = f.view_est(i), lst = f.view_lst(i);
    const bool free_part = a.duration - std::max(0, est + a.duration - lst) > 0;
    items.push_back({i, len, 0, free_part});
  }
  allocate_widening(f, items, delta);

  Explanation e;
  f.dom.push_antecedent(e.antecedents, f.lit_ge(u, begin + end - new_lb + 1 - au.duration));
  for (const WidenItem& it : items)
    if (it.p_ab - it.delta > 0) push_widened_pair(f, e.antecedents, it, begin, end);
  const Lit conseq = f.lit_ge(u, new_lb);
  e.consequent = conseq;
  const auto [rb, re] = f.real_window(begin, end);
  e.info = {f.reflected ? ExplInfo::Kind::UpdateUb : ExplInfo::Kind::UpdateLb,
            rb,
            re,
            u,
            conseq.value,
            static_cast<int>(delta),
            au.usage};
  return e;
}

// The double scan of Alg. 1 / Alg. 2 over task intervals: ends iterate over
// the distinct lct of V^EF descending, begins over the est descending.  E
// accumulates the free energy of contained activities and the right-shifted
// portion of activities reaching beyond the window.  When filtering, the
// candidate u maximises min(eEF_u, r_u * (end - est_u)) - enIn among the
// scanned activities that reach beyond the window.
inline std::optional<Explanation> scan(const Frame& f, std::vector<PendingUpdate>* pending) {
  const std::vector<ScanTask> tasks = collect_free_tasks(f);
  const int n = static_cast<int>(tasks.size());
  if (n == 0) return std::nullopt;

  std::vector<int> xs(n), ys(n);
  for (int i = 0; i < n; ++i) xs[i] = ys[i] = i;
  std::ranges::sort(xs, [&](int i, int j) {
    return tasks[i].est != tasks[j].est ? tasks[i].est < tasks[j].est : tasks[i].id < tasks[j].id;
  });
  std::ranges::sort(ys, [&](int i, int j) {
    return tasks[i].lct != tasks[j].lct ? tasks[i].lct < tasks[j].lct : tasks[i].id < tasks[j].id;
  });

  std::vector<int> est_prime(n);
  for (int i = 0; i < n; ++i) est_prime[i] = tasks[i].est;

  const std::int64_t cap = f.inst.capacity;
  int end = tasks[ys[n - 1]].lct + 1;
  for (int y = n - 1; y >= 0; --y) {
    const ScanTask& b = tasks[ys[y]];
    if (b.lct == end) continue;
    end = b.lct;
    std::int64_t energy = 0;
    int cand = -1;
    std::int64_t en_req_u = 0;
    for (int x = n - 1; x >= 0; --x) {
      const int ai = xs[x];
      const ScanTask& a = tasks[ai];
      if (a.est >= end) continue;
      const int begin = a.est;
      if (a.lct <= end) {
        energy += a.e_free;
      } else {
        const std::int64_t en_in =
            static_cast<std::int64_t>(a.r) * std::max(0, end - a.lst_free);
        energy += en_in;
        if (pending) {
          const std::int64_t en_req =
              std::min<std::int64_t>(a.e_free, static_cast<std::int64_t>(a.r) * (end - a.est)) -
              en_in;
          if (en_req > en_req_u) {
            en_req_u = en_req;
            cand = ai;
          }
        }
      }
      const std::int64_t avail = cap * (end - begin) - energy - f.tt_energy(begin, end);
      if (avail < 0) {
        if (pending) {
          assert(false && "ttef filter run on an overloaded state");
          return std::nullopt;
        }
        return explain_overload(f, begin, end);
      }
      if (pending && en_req_u > 0 && avail - en_req_u < 0) {
        const ScanTask& u = tasks[cand];
        const std::int64_t rest = static_cast<std::int64_t>(u.r) * (end - begin) - avail -
                                  static_cast<std::int64_t>(u.r) * std::max(0, end - u.lst);
        const int new_lb = begin + ceil_div(rest, u.r);
        if (new_lb > est_prime[cand]) {
          Explanation reason = explain_update(f, begin, end, u.id, new_lb, rest);
          const Lit conseq = *reason.consequent;
          pending->push_back(
              {u.id, conseq.kind == LitKind::StartGe, conseq.value, std::move(reason)});
          est_prime[cand] = new_lb;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Phase (b): conflict iff some task interval window has more required energy
// (free + profile + right-shifted) than the resource can supply.
inline std::optional<Explanation> ttef_check(const Instance& inst, const DomainStore& d,
                                             const ResourceProfile& profile) {
  detail::Frame f{inst, d, profile, false};
  return detail::scan(f, nullptr);
}

// Test-visible entry points for the explanation generators (forward time).
inline Explanation explain_overload(const Instance& inst, const DomainStore& d,
                                    const ResourceProfile& profile, int begin, int end) {
  detail::Frame f{inst, d, profile, false};
  return detail::explain_overload(f, begin, end);
}

inline Explanation explain_update(const Instance& inst, const DomainStore& d,
                                  const ResourceProfile& profile, int begin, int end, int u,
                                  int new_lb, std::int64_t rest) {
  detail::Frame f{inst, d, profile, false};
  return detail::explain_update(f, begin, end, u, new_lb, rest);
}

// Pending lower-bound updates of the TTEF scan, not yet committed.
inline std::vector<PendingUpdate> ttef_pending_lb(const Instance& inst, const DomainStore& d,
                                                  const ResourceProfile& profile) {
  std::vector<PendingUpdate> pending;
  detail::Frame f{inst, d, profile, false};
  detail::scan(f, &pending);
  return pending;
}

// Pending upper-bound updates: the lower-bound scan on the instance reflected
// about the horizon, with bounds and literals mapped back.
inline std::vector<PendingUpdate> ttef_pending_ub(const Instance& inst, const DomainStore& d,
                                                  const ResourceProfile& profile) {
  std::vector<PendingUpdate> pending;
  detail::Frame f{inst, d, profile, true};
  detail::scan(f, &pending);
  return pending;
}

inline FilterResult commit_updates(DomainStore& d, std::vector<PendingUpdate>&& pending) {
  FilterResult res;
  for (PendingUpdate& p : pending) {
    const SetResult r = p.is_lb ? d.set_lb(p.task, p.new_bound, std::move(p.reason))
                                : d.set_ub(p.task, p.new_bound, std::move(p.reason));
    if (r == SetResult::Conflict) {
      res.conflicted = true;
      return res;
    }
    if (r == SetResult::Changed) res.changed = true;
  }
  return res;
}

inline FilterResult ttef_filter_lb(const Instance& inst, DomainStore& d,
                                   const ResourceProfile& profile) {
  return commit_updates(d, ttef_pending_lb(inst, d, profile));
}

inline FilterResult ttef_filter_ub(const Instance& inst, DomainStore& d,
                                   const ResourceProfile& profile) {
  return commit_updates(d, ttef_pending_ub(inst, d, profile));
}

// Phase (d): both scans run against the same entry state, then all pending
// updates are committed.
inline FilterResult ttef_filter(const Instance& inst, DomainStore& d,
                                const ResourceProfile& profile) {
  std::vector<PendingUpdate> lb = ttef_pending_lb(inst, d, profile);
  std::vector<PendingUpdate> ub = ttef_pending_ub(inst, d, profile);
  FilterResult res = commit_updates(d, std::move(lb));
  if (res.conflicted) return res;
  FilterResult res2 = commit_updates(d, std::move(ub));
  res2.changed = res2.changed || res.changed;
  return res2;
}

}  // namespace cumulus

#endif  // CUMULUS_TTEF_HPP
