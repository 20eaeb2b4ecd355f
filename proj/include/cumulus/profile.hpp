#ifndef CUMULUS_PROFILE_HPP
#define CUMULUS_PROFILE_HPP

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "cumulus/model.hpp"

namespace cumulus {

struct ProfileSegment {
  int begin = 0;
  int end = 0;
  int height = 0;
};

// The compulsory-part resource profile: height(t) = sum of r_i over activities
// whose compulsory part [lst_i, ect_i) covers t, together with the suffix
// energy table ttAfter.  Segments are kept at event granularity (a boundary
// wherever any compulsory part starts or ends), so a segment is either fully
// inside a given activity's compulsory part or disjoint from it.
class ResourceProfile {
 public:
  static ResourceProfile build(const Instance& inst, const DomainStore& d) {
    struct Event {
      int time;
      int delta;
    };
    std::vector<Event> events;
    for (int i = 0; i < inst.size(); ++i) {
      const Activity& a = inst.activities[i];
      if (a.duration <= 0 || a.usage <= 0) continue;
      const TaskBounds b = derived_bounds(inst, i, d);
      if (b.lst < b.ect) {
        events.push_back({b.lst, a.usage});
        events.push_back({b.ect, -a.usage});
      }
    }
    ResourceProfile p;
    if (events.empty()) return p;
    std::ranges::sort(events, [](const Event& x, const Event& y) { return x.time < y.time; });
    int height = 0;
    std::size_t k = 0;
    while (k < events.size()) {
      const int t = events[k].time;
      while (k < events.size() && events[k].time == t) height += events[k++].delta;
      if (k < events.size() && height > 0) p.segs_.push_back({t, events[k].time, height});
    }
    assert(height == 0);
    p.energy_after_.assign(p.segs_.size() + 1, 0);
    for (std::size_t i = p.segs_.size(); i-- > 0;) {
      const ProfileSegment& s = p.segs_[i];
      p.energy_after_[i] =
          p.energy_after_[i + 1] + static_cast<std::int64_t>(s.height) * (s.end - s.begin);
    }
    return p;
  }

  std::span<const ProfileSegment> segments() const { return segs_; }

  bool empty() const { return segs_.empty(); }

  // Total compulsory energy at or after time tau; non-increasing, 0 beyond the
  // last segment.  Evaluated inside a segment by interpolation.
  std::int64_t tt_after(int tau) const {
    std::size_t lo = 0, hi = segs_.size();
    while (lo < hi) {  // first segment with end > tau
      std::size_t mid = (lo + hi) / 2;
      if (segs_[mid].end > tau)
        hi = mid;
      else
        lo = mid + 1;
    }
    if (lo == segs_.size()) return 0;
    const ProfileSegment& s = segs_[lo];
    if (tau <= s.begin) return energy_after_[lo];
    return energy_after_[lo] - static_cast<std::int64_t>(s.height) * (tau - s.begin);
  }

  // Compulsory energy inside [begin, end): ttAfter(begin) - ttAfter(end).
  std::int64_t tt_energy(int begin, int end) const {
    assert(begin <= end);
    return tt_after(begin) - tt_after(end);
  }

  std::int64_t total_energy() const { return energy_after_.empty() ? 0 : energy_after_[0]; }

  int height_at(int t) const {
    for (const ProfileSegment& s : segs_)
      if (s.begin <= t && t < s.end) return s.height;
    return 0;
  }

 private:
  std::vector<ProfileSegment> segs_;          // ascending, height > 0
  std::vector<std::int64_t> energy_after_;    // suffix energies per segment start
};

}  // namespace cumulus

#endif  // CUMULUS_PROFILE_HPP
