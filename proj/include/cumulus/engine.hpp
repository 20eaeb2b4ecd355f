#ifndef CUMULUS_ENGINE_HPP
#define CUMULUS_ENGINE_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cumulus/model.hpp"
#include "cumulus/profile.hpp"
#include "cumulus/timetable.hpp"
#include "cumulus/ttef.hpp"

namespace cumulus {

// A scheduling problem: one or more cumulative resources over shared start
// variables, plus the start variable minimised as the makespan objective
// (conventionally a zero-duration sink activity).
struct Problem {
  std::vector<Instance> resources;
  int objective = -1;

  const Instance& primary() const { return resources.front(); }
  int size() const { return resources.front().size(); }
};

inline Problem make_problem(Instance inst, int objective) {
  Problem p;
  p.resources.push_back(std::move(inst));
  p.objective = objective;
  return p;
}

inline void validate_problem(const Problem& p) {
  if (p.resources.empty()) throw ModelError("problem: no resources");
  for (const Instance& inst : p.resources) validate_instance(inst);
  const Instance& first = p.primary();
  for (const Instance& inst : p.resources) {
    if (inst.size() != first.size() || inst.horizon != first.horizon ||
        inst.precedences != first.precedences)
      throw ModelError("problem: resources disagree on the shared model");
    for (int i = 0; i < inst.size(); ++i)
      if (inst.activities[i].duration != first.activities[i].duration)
        throw ModelError("problem: resources disagree on durations");
  }
  if (p.objective < 0 || p.objective >= first.size())
    throw ModelError("problem: objective variable out of range");
}

enum class PropLevel : std::uint8_t { Tt, TtefCheck, Ttef };
enum class SolveMode : std::uint8_t { Ub, Lb };

struct SolverConfig {
  PropLevel prop = PropLevel::Ttef;
  SolveMode mode = SolveMode::Ub;
  int restart_base = 250;
  double restart_factor = 2.0;
  int sgs_budget = 500;
  double time_limit = 600.0;  // seconds; <= 0 means none
  int start_makespan = 1;     // lb mode
  std::uint64_t seed = 1;     // reported, the search itself is deterministic
  bool learning = true;
  std::size_t clause_cap = 20000;
};

inline long long geometric_limit(int base, double factor, int k) {
  double v = base;
  for (int i = 0; i < k; ++i) v *= factor;
  return static_cast<long long>(v);
}

struct SolveStats {
  long long failures = 0;
  long long decisions = 0;
  long long restarts = 0;
  long long solutions = 0;
  std::vector<long long> restart_limits;  // limit in force when each restart fired
};

enum class SolveStatus : std::uint8_t { Optimal, Feasible, LowerBound, Unknown, Infeasible };

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<int> value;
  SolveStats stats;
};

namespace detail {

// VSIDS-style activity table over literal atoms: the Boolean [[S_x <= v]]
// split points of start-time domains and the disjunction selectors.  Atoms
// are materialized on first bump; picking scans in insertion order so ties
// resolve deterministically.
class ActivityTable {
 public:
  explicit ActivityTable(double decay = 0.95) : decay_(decay) {}

  void bump(const Lit& l) {
    Atom key = atomize(l);
    auto [it, inserted] = index_.try_emplace(pack(key), atoms_.size());
    if (inserted) atoms_.push_back(key);
    Atom& a = atoms_[it->second];
    a.score += inc_;
    if (a.score > 1e100) rescale();
  }

  void on_conflict() { inc_ /= decay_; }

  std::optional<Lit> pick(const DomainStore& dom) const {
    int best = -1;
    for (int i = 0; i < static_cast<int>(atoms_.size()); ++i) {
      const Atom& a = atoms_[i];
      if (a.is_bool) {
        if (dom.bool_value(a.var).has_value()) continue;
      } else {
        if (!(dom.lb(a.var) <= a.bound && a.bound < dom.ub(a.var))) continue;
      }
      if (best < 0 || a.score > atoms_[best].score) best = i;
    }
    if (best < 0) return std::nullopt;
    const Atom& a = atoms_[best];
    if (a.is_bool) return Lit::boolean(a.var, dom.last_bool_polarity(a.var));
    return Lit::start_le(a.var, a.bound);  // prefer the lower half
  }

 private:
  struct Atom {
    bool is_bool = false;
    int var = 0;
    int bound = 0;
    double score = 0.0;
  };

  static Atom atomize(const Lit& l) {
    switch (l.kind) {
      case LitKind::StartLe:
        return {false, l.var, l.value, 0.0};
      case LitKind::StartGe:
        return {false, l.var, l.value - 1, 0.0};
      default:
        return {true, l.var, 0, 0.0};
    }
  }

  static std::uint64_t pack(const Atom& a) {
    return (static_cast<std::uint64_t>(a.is_bool) << 63) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a.var)) << 32) |
           static_cast<std::uint32_t>(a.bound);
  }

  void rescale() {
    for (Atom& a : atoms_) a.score *= 1e-100;
    inc_ *= 1e-100;
  }

  std::vector<Atom> atoms_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  double inc_ = 1.0;
  double decay_;
};

// Learned clause database with a fixed size cap; oldest clauses are dropped
// first, which is always sound.
class ClauseStore {
 public:
  explicit ClauseStore(std::size_t cap) : cap_(cap) {}

  void add(std::vector<Lit> clause) {
    clauses_.push_back(std::move(clause));
    if (clauses_.size() > cap_)
      clauses_.erase(clauses_.begin(), clauses_.begin() + static_cast<long>(cap_ / 2));
  }

  const std::vector<std::vector<Lit>>& clauses() const { return clauses_; }

  // Unit propagation by full scan; fine at the instance sizes in scope.
  bool propagate(DomainStore& d, bool& changed) {
    for (const std::vector<Lit>& c : clauses_) {
      int open_idx = -1;
      bool satisfied = false;
      int n_open = 0;
      for (int i = 0; i < static_cast<int>(c.size()); ++i) {
        switch (d.truth(c[i])) {
          case Truth::True:
            satisfied = true;
            break;
          case Truth::Open:
            ++n_open;
            open_idx = i;
            break;
          case Truth::False:
            break;
        }
        if (satisfied || n_open > 1) break;
      }
      if (satisfied || n_open > 1) continue;
      Explanation e;
      for (int i = 0; i < static_cast<int>(c.size()); ++i)
        if (i != open_idx) d.push_antecedent(e.antecedents, c[i].negated());
      if (n_open == 0) {
        d.fail(std::move(e));
        return false;
      }
      e.consequent = c[open_idx];
      SetResult r = SetResult::Unchanged;
      const Lit& l = c[open_idx];
      switch (l.kind) {
        case LitKind::StartGe:
          r = d.set_lb(l.var, l.value, std::move(e));
          break;
        case LitKind::StartLe:
          r = d.set_ub(l.var, l.value, std::move(e));
          break;
        case LitKind::BoolTrue:
          r = d.set_bool(l.var, true, std::move(e));
          break;
        case LitKind::BoolFalse:
          r = d.set_bool(l.var, false, std::move(e));
          break;
      }
      if (r == SetResult::Conflict) return false;
      if (r == SetResult::Changed) changed = true;
    }
    return true;
  }

 private:
  std::vector<std::vector<Lit>> clauses_;
  std::size_t cap_;
};

}  // namespace detail

struct Analysis {
  bool unsat = false;
  std::vector<Lit> clause;  // clause[0] is the asserting literal
  int backjump = 0;
};

// 1UIP conflict analysis over the trail.  The conflict set is kept as the
// strongest required bound per variable and side; resolution replaces the
// most recently implied member with the antecedents of its reason until a
// single member at the conflict level remains.
inline Analysis analyze_conflict(const DomainStore& dom, const Explanation& failure,
                                 detail::ActivityTable* activities = nullptr) {
  enum Side : int { NeedLb = 0, NeedUb = 1, NeedBool = 2 };
  std::map<std::pair<int, int>, int> need;  // (side, var) -> bound / polarity

  auto add = [&](const Lit& l) {
    if (!l.is_bool() && dom.root_truth(l) == Truth::True) return;
    const auto imp = dom.implier(l);
    if (imp && imp->level == 0) return;  // root-level facts drop from clauses
    if (activities) activities->bump(l);
    switch (l.kind) {
      case LitKind::StartGe: {
        auto [it, fresh] = need.try_emplace({NeedLb, l.var}, l.value);
        if (!fresh) it->second = std::max(it->second, l.value);
        break;
      }
      case LitKind::StartLe: {
        auto [it, fresh] = need.try_emplace({NeedUb, l.var}, l.value);
        if (!fresh) it->second = std::min(it->second, l.value);
        break;
      }
      case LitKind::BoolTrue:
      case LitKind::BoolFalse: {
        const int pol = l.kind == LitKind::BoolTrue ? 1 : 0;
        auto [it, fresh] = need.try_emplace({NeedBool, l.var}, pol);
        assert(it->second == pol && "both polarities of one Boolean in a conflict");
        break;
      }
    }
  };

  auto to_lit = [](std::pair<int, int> key, int value) {
    switch (key.first) {
      case NeedLb:
        return Lit::start_ge(key.second, value);
      case NeedUb:
        return Lit::start_le(key.second, value);
      default:
        return Lit::boolean(key.second, value == 1);
    }
  };

  for (const Lit& l : failure.antecedents) add(l);

  Analysis out;
  for (;;) {
    struct Member {
      std::pair<int, int> key;
      int value;
      DomainStore::Implier imp;
    };
    std::vector<Member> members;
    members.reserve(need.size());
    int max_level = 0;
    for (const auto& [key, value] : need) {
      const auto imp = dom.implier(to_lit(key, value));
      assert(imp.has_value());
      members.push_back({key, value, *imp});
      max_level = std::max(max_level, imp->level);
    }
    if (members.empty() || max_level == 0) {
      out.unsat = true;
      return out;
    }
    int at_max = 0;
    int last = -1;
    for (int i = 0; i < static_cast<int>(members.size()); ++i) {
      if (members[i].imp.level != max_level) continue;
      ++at_max;
      if (last < 0 || members[i].imp.pos > members[last].imp.pos) last = i;
    }
    if (at_max == 1) {
      // members[last] is the unique implication point
      out.clause.push_back(to_lit(members[last].key, members[last].value).negated());
      int backjump = 0;
      for (int i = 0; i < static_cast<int>(members.size()); ++i) {
        if (i == last) continue;
        out.clause.push_back(to_lit(members[i].key, members[i].value).negated());
        backjump = std::max(backjump, members[i].imp.level);
      }
      out.backjump = backjump;
      return out;
    }
    const Member& m = members[last];
    assert(!m.imp.is_decision && "resolving a decision with other literals at its level");
    const Explanation* reason = m.imp.reason;
    need.erase(m.key);
    for (const Lit& l : reason->antecedents) add(l);
  }
}

// One solver owns one domain store; instances of Solver share nothing and may
// run concurrently on disjoint problems.
class Solver {
 public:
  using Clock = std::chrono::steady_clock;

  // Test hooks: node_observer sees (entry bounds, store after propagation,
  // conflicted); clause_observer sees each learned clause with the incumbent
  // in force; the explanation observer is forwarded to the domain store.
  std::function<void(const std::vector<std::pair<int, int>>&, const DomainStore&, bool)>
      node_observer;
  std::function<void(const std::vector<Lit>&, std::optional<int>)> clause_observer;
  std::function<void(const Explanation&)> explanation_observer;

  Solver(const Problem& prob, SolverConfig cfg)
      : prob_(prob), cfg_(cfg), clauses_(cfg.clause_cap), vsids_(0.95) {
    validate_problem(prob_);
    const Instance& first = prob_.primary();
    n_ = first.size();
    for (int i = 0; i < n_; ++i) {
      durations_.push_back(first.activities[i].duration);
      dom_.add_start(first.windows[i].est, first.windows[i].lst);
    }
    precedences_ = first.precedences;
    // Disjunction pairs: activities that cannot overlap on some resource get
    // a Boolean selector with the two half-reified orderings.
    std::map<std::pair<int, int>, bool> seen;
    for (const Instance& inst : prob_.resources)
      for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
          const Activity &a = inst.activities[i], &b = inst.activities[j];
          if (a.duration > 0 && b.duration > 0 && a.usage + b.usage > inst.capacity &&
              seen.try_emplace({i, j}, true).second)
            disjunctions_.push_back({dom_.add_bool(), i, j});
        }
  }

  DomainStore& domains() { return dom_; }
  const DomainStore& domains() const { return dom_; }
  const std::vector<std::vector<Lit>>& learned_clauses() const { return clauses_.clauses(); }
  std::optional<int> incumbent() const { return incumbent_; }
  const std::vector<int>& best_starts() const { return best_starts_; }

  struct Disjunction {
    int selector;
    int before;
    int after;
  };
  const std::vector<Disjunction>& disjunctions() const { return disjunctions_; }

  SolveResult solve() { return cfg_.mode == SolveMode::Ub ? solve_ub() : solve_lb(); }

  SolveResult solve_ub() {
    arm_deadline();
    return search(/*allow_restarts=*/true, /*stop_at_first_solution=*/false);
  }

  // Destructive lower bound: prove makespans start, start+1, ... infeasible
  // until the first one admitting a solution; no restarts, state rebuilt per
  // iteration.
  SolveResult solve_lb() {
    arm_deadline();
    SolveStats total;
    std::optional<int> last_refuted;
    for (int m = cfg_.start_makespan;; ++m) {
      Solver inner(prob_, cfg_);
      inner.deadline_ = deadline_;
      inner.node_observer = node_observer;
      inner.clause_observer = clause_observer;
      inner.explanation_observer = explanation_observer;
      bool root_ok = true;
      for (int i = 0; i < n_ && root_ok; ++i) {
        Explanation e;
        e.consequent = Lit::start_le(i, m - durations_[i]);
        if (inner.dom_.set_ub(i, m - durations_[i], std::move(e)) == SetResult::Conflict)
          root_ok = false;
      }
      SolveResult r;
      if (root_ok)
        r = inner.search(/*allow_restarts=*/false, /*stop_at_first_solution=*/true);
      else
        r.status = SolveStatus::Infeasible;
      accumulate(total, r.stats);
      if (r.status == SolveStatus::Feasible || r.status == SolveStatus::Optimal)
        return {SolveStatus::Optimal, r.value, total};
      if (r.status == SolveStatus::Infeasible) {
        last_refuted = m;
        continue;
      }
      if (last_refuted) return {SolveStatus::LowerBound, *last_refuted + 1, total};
      return {SolveStatus::Unknown, std::nullopt, total};
    }
  }

  // Runs all propagators to fixpoint.  False means a conflict explanation is
  // queued in the domain store.
  bool propagate_to_fixpoint() { return propagate(); }

 private:
  void arm_deadline() {
    if (cfg_.time_limit > 0)
      deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(cfg_.time_limit));
    else
      deadline_.reset();
  }

  bool time_up() const { return deadline_ && Clock::now() >= *deadline_; }

  static void accumulate(SolveStats& into, const SolveStats& from) {
    into.failures += from.failures;
    into.decisions += from.decisions;
    into.restarts += from.restarts;
    into.solutions += from.solutions;
    into.restart_limits.insert(into.restart_limits.end(), from.restart_limits.begin(),
                               from.restart_limits.end());
  }

  SetResult apply_lit(const Lit& l, Explanation reason) {
    switch (l.kind) {
      case LitKind::StartGe:
        return dom_.set_lb(l.var, l.value, std::move(reason));
      case LitKind::StartLe:
        return dom_.set_ub(l.var, l.value, std::move(reason));
      case LitKind::BoolTrue:
        return dom_.set_bool(l.var, true, std::move(reason));
      case LitKind::BoolFalse:
        return dom_.set_bool(l.var, false, std::move(reason));
    }
    return SetResult::Unchanged;
  }

  bool prop_precedences(bool& changed) {
    for (auto [i, j] : precedences_) {
      const int lo = dom_.lb(i) + durations_[i];
      if (lo > dom_.lb(j)) {
        Explanation e;
        dom_.push_antecedent(e.antecedents, Lit::start_ge(i, dom_.lb(i)));
        e.consequent = Lit::start_ge(j, lo);
        const SetResult r = dom_.set_lb(j, lo, std::move(e));
        if (r == SetResult::Conflict) return false;
        if (r == SetResult::Changed) changed = true;
      }
      const int hi = dom_.ub(j) - durations_[i];
      if (hi < dom_.ub(i)) {
        Explanation e;
        dom_.push_antecedent(e.antecedents, Lit::start_le(j, dom_.ub(j)));
        e.consequent = Lit::start_le(i, hi);
        const SetResult r = dom_.set_ub(i, hi, std::move(e));
        if (r == SetResult::Conflict) return false;
        if (r == SetResult::Changed) changed = true;
      }
    }
    return true;
  }

  bool enforce_order(int selector, bool polarity, int i, int j, bool& changed) {
    // selector literal + bound literal explain each propagated bound
    const int lo = dom_.lb(i) + durations_[i];
    if (lo > dom_.lb(j)) {
      Explanation e;
      e.antecedents.push_back(Lit::boolean(selector, polarity));
      dom_.push_antecedent(e.antecedents, Lit::start_ge(i, dom_.lb(i)));
      e.consequent = Lit::start_ge(j, lo);
      const SetResult r = dom_.set_lb(j, lo, std::move(e));
      if (r == SetResult::Conflict) return false;
      if (r == SetResult::Changed) changed = true;
    }
    const int hi = dom_.ub(j) - durations_[i];
    if (hi < dom_.ub(i)) {
      Explanation e;
      e.antecedents.push_back(Lit::boolean(selector, polarity));
      dom_.push_antecedent(e.antecedents, Lit::start_le(j, dom_.ub(j)));
      e.consequent = Lit::start_le(i, hi);
      const SetResult r = dom_.set_ub(i, hi, std::move(e));
      if (r == SetResult::Conflict) return false;
      if (r == SetResult::Changed) changed = true;
    }
    return true;
  }

  bool prop_disjunctions(bool& changed) {
    for (const Disjunction& d : disjunctions_) {
      const auto val = dom_.bool_value(d.selector);
      if (val.has_value()) {
        if (*val) {
          if (!enforce_order(d.selector, true, d.before, d.after, changed)) return false;
        } else {
          if (!enforce_order(d.selector, false, d.after, d.before, changed)) return false;
        }
        continue;
      }
      // selector unfixed: rule out impossible orders
      if (dom_.lb(d.before) + durations_[d.before] > dom_.ub(d.after)) {
        Explanation e;
        dom_.push_antecedent(e.antecedents, Lit::start_ge(d.before, dom_.lb(d.before)));
        dom_.push_antecedent(e.antecedents, Lit::start_le(d.after, dom_.ub(d.after)));
        e.consequent = Lit::boolean(d.selector, false);
        const SetResult r = dom_.set_bool(d.selector, false, std::move(e));
        if (r == SetResult::Conflict) return false;
        if (r == SetResult::Changed) changed = true;
      }
      if (dom_.lb(d.after) + durations_[d.after] > dom_.ub(d.before)) {
        Explanation e;
        dom_.push_antecedent(e.antecedents, Lit::start_ge(d.after, dom_.lb(d.after)));
        dom_.push_antecedent(e.antecedents, Lit::start_le(d.before, dom_.ub(d.before)));
        e.consequent = Lit::boolean(d.selector, true);
        const SetResult r = dom_.set_bool(d.selector, true, std::move(e));
        if (r == SetResult::Conflict) return false;
        if (r == SetResult::Changed) changed = true;
      }
    }
    return true;
  }

  // Phases per propagation round: precedence and clause propagation to a
  // local fixpoint, then per resource (a) tt check, (b) ttef check, (c) tt
  // filtering, (d) ttef filtering, where (d) works from the state (b) saw
  // rather than (c)'s changes.  Rounds repeat until nothing changes.
  bool propagate() {
    if (dom_.has_conflict()) return false;
    for (;;) {
      bool changed = false;
      for (;;) {
        bool c = false;
        if (!prop_precedences(c)) return false;
        if (!prop_disjunctions(c)) return false;
        if (!clauses_.propagate(dom_, c)) return false;
        changed |= c;
        if (!c) break;
      }
      for (const Instance& inst : prob_.resources) {
        const ResourceProfile profile = ResourceProfile::build(inst, dom_);
        if (auto e = tt_check(inst, dom_, profile)) {
          dom_.fail(std::move(*e));
          return false;
        }
        if (cfg_.prop != PropLevel::Tt) {
          if (auto e = ttef_check(inst, dom_, profile)) {
            dom_.fail(std::move(*e));
            return false;
          }
        }
        std::vector<PendingUpdate> pending_lb, pending_ub;
        if (cfg_.prop == PropLevel::Ttef) {
          pending_lb = ttef_pending_lb(inst, dom_, profile);
          pending_ub = ttef_pending_ub(inst, dom_, profile);
        }
        const FilterResult tt = tt_filter(inst, dom_, profile);
        if (tt.conflicted) return false;
        changed |= tt.changed;
        if (cfg_.prop == PropLevel::Ttef) {
          FilterResult f = commit_updates(dom_, std::move(pending_lb));
          if (f.conflicted) return false;
          changed |= f.changed;
          f = commit_updates(dom_, std::move(pending_ub));
          if (f.conflicted) return false;
          changed |= f.changed;
        }
      }
      if (!changed) return true;
    }
  }

  bool all_starts_fixed() const {
    for (int i = 0; i < n_; ++i)
      if (!dom_.is_fixed(i)) return false;
    return true;
  }

  std::optional<Lit> sgs_decision() const {
    // serial-generation flavour: earliest possible start first
    int best = -1;
    for (int i = 0; i < n_; ++i) {
      if (dom_.is_fixed(i)) continue;
      if (best < 0 || dom_.lb(i) < dom_.lb(best) ||
          (dom_.lb(i) == dom_.lb(best) &&
           (dom_.ub(i) < dom_.ub(best) || (dom_.ub(i) == dom_.ub(best) && i < best))))
        best = i;
    }
    if (best < 0) return std::nullopt;
    return Lit::start_le(best, dom_.lb(best));
  }

  Lit pick_decision() {
    if (decisions_since_start_ >= cfg_.sgs_budget && cfg_.learning)
      if (auto l = vsids_.pick(dom_)) return *l;
    return *sgs_decision();
  }

  // Returns false when the search space is exhausted (conflict at the root).
  bool handle_conflict(bool allow_restarts) {
    ++stats_.failures;
    ++failures_since_restart_;
    auto failure = dom_.take_conflict();
    assert(failure.has_value());
    if (!cfg_.learning) {
      if (dom_.level() == 0) return false;
      const Lit flipped = decision_trail_.back().negated();
      dom_.backtrack_to(dom_.level() - 1);
      decision_trail_.pop_back();
      apply_lit(flipped, Explanation{});
      return true;
    }
    Analysis an = analyze_conflict(dom_, *failure, &vsids_);
    vsids_.on_conflict();
    if (an.unsat) return false;
    if (clause_observer) clause_observer(an.clause, incumbent_);
    clauses_.add(an.clause);
    dom_.backtrack_to(an.backjump);
    decision_trail_.resize(an.backjump);
    Explanation reason;
    reason.consequent = an.clause[0];
    for (std::size_t k = 1; k < an.clause.size(); ++k)
      reason.antecedents.push_back(an.clause[k].negated());
    apply_lit(an.clause[0], std::move(reason));
    if (allow_restarts && failures_since_restart_ >= restart_limit_) {
      stats_.restart_limits.push_back(restart_limit_);
      ++stats_.restarts;
      dom_.backtrack_to(0);
      decision_trail_.clear();
      failures_since_restart_ = 0;
      decisions_since_start_ = 0;
      restart_limit_ = geometric_limit(cfg_.restart_base, cfg_.restart_factor,
                                       static_cast<int>(stats_.restarts));
    }
    return true;
  }

  SolveResult search(bool allow_restarts, bool stop_at_first_solution) {
    dom_.explanation_observer = explanation_observer;
    restart_limit_ = cfg_.restart_base;
    failures_since_restart_ = 0;
    decisions_since_start_ = 0;
    for (;;) {
      const auto entry = node_observer ? dom_.start_bounds()
                                       : std::vector<std::pair<int, int>>{};
      const bool ok = propagate();
      if (node_observer) node_observer(entry, dom_, !ok);
      if (!ok) {
        if (!handle_conflict(allow_restarts)) return finish_exhausted();
        if (time_up()) return finish_timeout();
        continue;
      }
      if (all_starts_fixed()) {
        ++stats_.solutions;
        incumbent_ = dom_.lb(prob_.objective);
        best_starts_.clear();
        for (int i = 0; i < n_; ++i) best_starts_.push_back(dom_.lb(i));
        if (stop_at_first_solution) return {SolveStatus::Feasible, incumbent_, stats_};
        dom_.backtrack_to(0);
        decision_trail_.clear();
        decisions_since_start_ = 0;
        Explanation cut;
        cut.consequent = Lit::start_le(prob_.objective, *incumbent_ - 1);
        if (dom_.set_ub(prob_.objective, *incumbent_ - 1, std::move(cut)) == SetResult::Conflict)
          return {SolveStatus::Optimal, incumbent_, stats_};
        continue;
      }
      if (time_up()) return finish_timeout();
      const Lit dec = pick_decision();
      ++stats_.decisions;
      ++decisions_since_start_;
      decision_trail_.push_back(dec);
      dom_.decide(dec);
    }
  }

  SolveResult finish_exhausted() const {
    if (incumbent_) return {SolveStatus::Optimal, incumbent_, stats_};
    return {SolveStatus::Infeasible, std::nullopt, stats_};
  }

  SolveResult finish_timeout() const {
    if (incumbent_) return {SolveStatus::Feasible, incumbent_, stats_};
    return {SolveStatus::Unknown, std::nullopt, stats_};
  }

  Problem prob_;
  SolverConfig cfg_;
  DomainStore dom_;
  int n_ = 0;
  std::vector<int> durations_;
  std::vector<std::pair<int, int>> precedences_;
  std::vector<Disjunction> disjunctions_;
  detail::ClauseStore clauses_;
  detail::ActivityTable vsids_;
  SolveStats stats_;
  std::optional<int> incumbent_;
  std::vector<int> best_starts_;
  std::vector<Lit> decision_trail_;
  std::optional<Clock::time_point> deadline_;
  long long restart_limit_ = 250;
  long long failures_since_restart_ = 0;
  long long decisions_since_start_ = 0;
};

}  // namespace cumulus

#endif  // CUMULUS_ENGINE_HPP
