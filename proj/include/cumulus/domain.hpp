#ifndef CUMULUS_DOMAIN_HPP
#define CUMULUS_DOMAIN_HPP

#include <cassert>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cumulus {

// Bounds literals over start-time variables, plus literals on the Boolean
// selectors of disjunctions.  [[v <= S]] is stored as StartGe(v) and is the
// negation of [[S <= v-1]]; both map to the same atom (var, v-1).
enum class LitKind : std::uint8_t { StartLe, StartGe, BoolTrue, BoolFalse };

struct Lit {
  LitKind kind = LitKind::StartLe;
  std::int32_t var = -1;
  std::int32_t value = 0;  // bound; unused for Boolean literals

  static Lit start_le(int var, int v) { return {LitKind::StartLe, var, v}; }
  static Lit start_ge(int var, int v) { return {LitKind::StartGe, var, v}; }
  static Lit boolean(int var, bool val) {
    return {val ? LitKind::BoolTrue : LitKind::BoolFalse, var, 0};
  }

  Lit negated() const {
    switch (kind) {
      case LitKind::StartLe:
        return start_ge(var, value + 1);
      case LitKind::StartGe:
        return start_le(var, value - 1);
      case LitKind::BoolTrue:
        return boolean(var, false);
      case LitKind::BoolFalse:
        return boolean(var, true);
    }
    return {};
  }

  bool is_bool() const { return kind == LitKind::BoolTrue || kind == LitKind::BoolFalse; }

  bool operator==(const Lit&) const = default;
};

enum class Truth : std::uint8_t { True, False, Open };

enum class SetResult : std::uint8_t { Changed, Unchanged, Conflict };

// Outcome of a filtering pass; a conflict leaves its explanation queued in the
// domain store.
struct FilterResult {
  bool changed = false;
  bool conflicted = false;
};

// Metadata carried by explanations so that the oracle's energetic checker can
// validate them against the window they were derived from.  Propagation and
// conflict analysis ignore it.
struct ExplInfo {
  enum class Kind : std::uint8_t { None, Overload, UpdateLb, UpdateUb };
  Kind kind = Kind::None;
  int begin = 0;
  int end = 0;        // window [begin, end)
  int task = -1;      // filtered activity, for Update*
  int new_bound = 0;  // newLB / newUB, for Update*
  int widen_budget = -1;  // delta available when widening (Update* only)
  int usage = 0;          // r_u of the filtered activity (Update* only)
};

// A clause of bounds literals: antecedents (all true at emission) implying
// the consequent, or FAIL when consequent is empty.
struct Explanation {
  std::vector<Lit> antecedents;
  std::optional<Lit> consequent;
  ExplInfo info;

  bool is_fail() const { return !consequent.has_value(); }
};

// Trailed bounds store for start-time variables and Boolean variables.
// Bounds are monotone between backtracks; every non-decision entry carries
// its eagerly stored reason.  One store belongs to exactly one solver worker.
class DomainStore {
 public:
  struct Implier {
    int level = 0;
    std::int64_t pos = 0;
    bool is_decision = false;
    const Explanation* reason = nullptr;  // null for decisions
  };

  // Invoked for every explanation that enters the system: reasons of committed
  // bound changes, decisions excluded, plus queued failures.
  std::function<void(const Explanation&)> explanation_observer;

  int add_start(int est0, int lst0) {
    if (est0 > lst0) throw std::invalid_argument("empty initial domain");
    starts_.push_back(StartVar{est0, lst0, est0, lst0, {}, {}});
    return static_cast<int>(starts_.size()) - 1;
  }

  int add_bool() {
    bools_.push_back(BoolVar{});
    return static_cast<int>(bools_.size()) - 1;
  }

  int num_starts() const { return static_cast<int>(starts_.size()); }
  int num_bools() const { return static_cast<int>(bools_.size()); }

  int lb(int var) const { return starts_[var].lb; }
  int ub(int var) const { return starts_[var].ub; }
  int est0(int var) const { return starts_[var].est0; }
  int lst0(int var) const { return starts_[var].lst0; }
  bool is_fixed(int var) const { return starts_[var].lb == starts_[var].ub; }

  std::optional<bool> bool_value(int var) const {
    if (bools_[var].value < 0) return std::nullopt;
    return bools_[var].value == 1;
  }

  bool last_bool_polarity(int var) const { return bools_[var].last_polarity; }

  int level() const { return level_; }

  // Truth of a literal against the current bounds.
  Truth truth(Lit l) const {
    switch (l.kind) {
      case LitKind::StartLe: {
        const StartVar& v = starts_[l.var];
        if (v.ub <= l.value) return Truth::True;
        if (v.lb > l.value) return Truth::False;
        return Truth::Open;
      }
      case LitKind::StartGe: {
        const StartVar& v = starts_[l.var];
        if (v.lb >= l.value) return Truth::True;
        if (v.ub < l.value) return Truth::False;
        return Truth::Open;
      }
      case LitKind::BoolTrue: {
        const BoolVar& b = bools_[l.var];
        if (b.value < 0) return Truth::Open;
        return b.value == 1 ? Truth::True : Truth::False;
      }
      case LitKind::BoolFalse: {
        const BoolVar& b = bools_[l.var];
        if (b.value < 0) return Truth::Open;
        return b.value == 0 ? Truth::True : Truth::False;
      }
    }
    return Truth::Open;
  }

  bool literal_holds(Lit l) const { return truth(l) == Truth::True; }

  // Truth against the initial domain: [[S <= v]], v >= lst0 and [[v <= S]],
  // v <= est0 canonicalize to TRUE and are dropped from clauses.
  Truth root_truth(Lit l) const {
    switch (l.kind) {
      case LitKind::StartLe: {
        const StartVar& v = starts_[l.var];
        if (l.value >= v.lst0) return Truth::True;
        if (l.value < v.est0) return Truth::False;
        return Truth::Open;
      }
      case LitKind::StartGe: {
        const StartVar& v = starts_[l.var];
        if (l.value <= v.est0) return Truth::True;
        if (l.value > v.lst0) return Truth::False;
        return Truth::Open;
      }
      default:
        return Truth::Open;
    }
  }

  // Appends a literal to a clause under construction, dropping canonical TRUE
  // literals.  The literal must not be canonically FALSE.
  void push_antecedent(std::vector<Lit>& out, Lit l) const {
    Truth rt = root_truth(l);
    if (rt == Truth::True) return;
    assert(rt != Truth::False && "canonically false antecedent");
    assert(literal_holds(l) && "antecedent does not hold at emission");
    out.push_back(l);
  }

  SetResult set_lb(int var, int v, Explanation reason) {
    return set_lb_impl(var, v, std::move(reason), false);
  }

  SetResult set_ub(int var, int v, Explanation reason) {
    return set_ub_impl(var, v, std::move(reason), false);
  }

  SetResult set_bool(int var, bool val, Explanation reason) {
    return set_bool_impl(var, val, std::move(reason), false);
  }

  // Queues a failure explanation for conflict analysis.
  void fail(Explanation e) {
    assert(e.is_fail());
    notify(e);
    if (!conflict_) conflict_ = std::move(e);
  }

  bool has_conflict() const { return conflict_.has_value(); }

  std::optional<Explanation> take_conflict() {
    std::optional<Explanation> c = std::move(conflict_);
    conflict_.reset();
    return c;
  }

  // Opens a new decision level and applies the decision literal.
  void decide(Lit l) {
    if (truth(l) != Truth::Open) throw std::logic_error("decision literal not open");
    ++level_;
    level_marks_.push_back(trail_.size());
    SetResult r = SetResult::Unchanged;
    switch (l.kind) {
      case LitKind::StartLe:
        r = set_ub_impl(l.var, l.value, Explanation{}, true);
        break;
      case LitKind::StartGe:
        r = set_lb_impl(l.var, l.value, Explanation{}, true);
        break;
      case LitKind::BoolTrue:
        r = set_bool_impl(l.var, true, Explanation{}, true);
        break;
      case LitKind::BoolFalse:
        r = set_bool_impl(l.var, false, Explanation{}, true);
        break;
    }
    assert(r == SetResult::Changed);
    (void)r;
  }

  void backtrack_to(int target) {
    if (target > level_ || target < 0) throw std::logic_error("backtrack_to: bad level");
    while (level_ > target) {
      std::size_t mark = level_marks_.back();
      level_marks_.pop_back();
      while (trail_.size() > mark) {
        undo(trail_.back());
        trail_.pop_back();
      }
      --level_;
    }
    conflict_.reset();
  }

  // Earliest trail entry that makes the literal true; nullopt when the literal
  // holds in the initial domain.  The literal must currently hold.
  std::optional<Implier> implier(Lit l) const {
    switch (l.kind) {
      case LitKind::StartGe: {
        const StartVar& v = starts_[l.var];
        if (l.value <= v.est0) return std::nullopt;
        for (const BoundRec& h : v.lb_hist)
          if (h.value >= l.value) return make_implier(h);
        throw std::logic_error("implier: lower-bound literal does not hold");
      }
      case LitKind::StartLe: {
        const StartVar& v = starts_[l.var];
        if (l.value >= v.lst0) return std::nullopt;
        for (const BoundRec& h : v.ub_hist)
          if (h.value <= l.value) return make_implier(h);
        throw std::logic_error("implier: upper-bound literal does not hold");
      }
      case LitKind::BoolTrue:
      case LitKind::BoolFalse: {
        const BoolVar& b = bools_[l.var];
        if (b.value < 0 || (b.value == 1) != (l.kind == LitKind::BoolTrue))
          throw std::logic_error("implier: boolean literal does not hold");
        return make_implier(b.rec);
      }
    }
    return std::nullopt;
  }

  std::vector<std::pair<int, int>> start_bounds() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(starts_.size());
    for (const StartVar& v : starts_) out.emplace_back(v.lb, v.ub);
    return out;
  }

 private:
  struct BoundRec {
    int value = 0;
    int level = 0;
    std::int64_t pos = 0;
    bool is_decision = false;
    Explanation reason;
  };

  struct StartVar {
    int est0, lst0;
    int lb, ub;
    std::vector<BoundRec> lb_hist;  // strictly increasing values
    std::vector<BoundRec> ub_hist;  // strictly decreasing values
  };

  struct BoolVar {
    std::int8_t value = -1;  // -1 unset
    bool last_polarity = true;
    BoundRec rec;
  };

  enum class TrailKind : std::uint8_t { Lb, Ub, Bool };
  struct TrailRec {
    TrailKind kind;
    int var;
    int old_value;
  };

  static Implier make_implier(const BoundRec& h) {
    return Implier{h.level, h.pos, h.is_decision, h.is_decision ? nullptr : &h.reason};
  }

  void notify(const Explanation& e) {
    if (explanation_observer) explanation_observer(e);
  }

  SetResult set_lb_impl(int var, int v, Explanation reason, bool decision) {
    StartVar& s = starts_[var];
    if (v <= s.lb) return SetResult::Unchanged;
    if (v > s.ub) {
      Explanation f;
      f.antecedents = std::move(reason.antecedents);
      push_antecedent(f.antecedents, Lit::start_le(var, s.ub));
      f.info = reason.info;
      if (f.info.kind == ExplInfo::Kind::UpdateLb || f.info.kind == ExplInfo::Kind::UpdateUb)
        f.info.kind = ExplInfo::Kind::Overload;
      fail(std::move(f));
      return SetResult::Conflict;
    }
    if (!decision) notify(reason);
    trail_.push_back({TrailKind::Lb, var, s.lb});
    s.lb = v;
    s.lb_hist.push_back({v, level_, pos_++, decision, std::move(reason)});
    return SetResult::Changed;
  }

  SetResult set_ub_impl(int var, int v, Explanation reason, bool decision) {
    StartVar& s = starts_[var];
    if (v >= s.ub) return SetResult::Unchanged;
    if (v < s.lb) {
      Explanation f;
      f.antecedents = std::move(reason.antecedents);
      push_antecedent(f.antecedents, Lit::start_ge(var, s.lb));
      f.info = reason.info;
      if (f.info.kind == ExplInfo::Kind::UpdateLb || f.info.kind == ExplInfo::Kind::UpdateUb)
        f.info.kind = ExplInfo::Kind::Overload;
      fail(std::move(f));
      return SetResult::Conflict;
    }
    if (!decision) notify(reason);
    trail_.push_back({TrailKind::Ub, var, s.ub});
    s.ub = v;
    s.ub_hist.push_back({v, level_, pos_++, decision, std::move(reason)});
    return SetResult::Changed;
  }

  SetResult set_bool_impl(int var, bool val, Explanation reason, bool decision) {
    BoolVar& b = bools_[var];
    if (b.value >= 0) {
      if ((b.value == 1) == val) return SetResult::Unchanged;
      Explanation f;
      f.antecedents = std::move(reason.antecedents);
      f.antecedents.push_back(Lit::boolean(var, b.value == 1));
      f.info = reason.info;
      fail(std::move(f));
      return SetResult::Conflict;
    }
    if (!decision) notify(reason);
    trail_.push_back({TrailKind::Bool, var, b.value});
    b.value = val ? 1 : 0;
    b.last_polarity = val;
    b.rec = {val ? 1 : 0, level_, pos_++, decision, std::move(reason)};
    return SetResult::Changed;
  }

  void undo(const TrailRec& r) {
    switch (r.kind) {
      case TrailKind::Lb:
        starts_[r.var].lb = r.old_value;
        starts_[r.var].lb_hist.pop_back();
        break;
      case TrailKind::Ub:
        starts_[r.var].ub = r.old_value;
        starts_[r.var].ub_hist.pop_back();
        break;
      case TrailKind::Bool:
        bools_[r.var].value = static_cast<std::int8_t>(r.old_value);
        break;
    }
  }

  std::vector<StartVar> starts_;
  std::vector<BoolVar> bools_;
  std::vector<TrailRec> trail_;
  std::vector<std::size_t> level_marks_;
  std::optional<Explanation> conflict_;
  int level_ = 0;
  std::int64_t pos_ = 0;
};

}  // namespace cumulus

#endif  // CUMULUS_DOMAIN_HPP
