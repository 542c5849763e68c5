#include "sampcap/frequency_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sampcap/error.hpp"

namespace sampcap {

FrequencySet::FrequencySet(std::vector<Interval> intervals) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const Interval& iv = intervals[i];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      std::ostringstream os;
      os << "set[" << i << "]: interval endpoints must be finite";
      fail(ErrorKind::validation, os.str());
    }
    if (iv.lo > iv.hi) {
      std::ostringstream os;
      os << "set[" << i << "]: interval reversed";
      fail(ErrorKind::validation, os.str());
    }
  }
  std::erase_if(intervals, [](const Interval& iv) { return !(iv.hi > iv.lo); });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

  for (const Interval& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
    } else {
      intervals_.push_back(iv);
    }
  }
  for (const Interval& iv : intervals_) measure_ += iv.length();
}

bool FrequencySet::contains(double f) const noexcept {
  auto it = std::upper_bound(
      intervals_.begin(), intervals_.end(), f,
      [](double x, const Interval& iv) { return x < iv.lo; });
  if (it == intervals_.begin()) return false;
  return std::prev(it)->contains(f);
}

double FrequencySet::overlap(Interval iv) const noexcept {
  double total = 0.0;
  for (const Interval& mine : intervals_) {
    if (mine.lo >= iv.hi) break;
    const double lo = std::max(mine.lo, iv.lo);
    const double hi = std::min(mine.hi, iv.hi);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

FrequencySet FrequencySet::intersect(const FrequencySet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  const auto& a = intervals_;
  const auto& b = other.intervals_;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return FrequencySet(std::move(out));
}

FrequencySet FrequencySet::unite(const FrequencySet& other) const {
  std::vector<Interval> all(intervals_.begin(), intervals_.end());
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return FrequencySet(std::move(all));
}

FrequencySet FrequencySet::subtract(const FrequencySet& other) const {
  std::vector<Interval> out;
  for (const Interval& iv : intervals_) {
    double cursor = iv.lo;
    for (const Interval& cut : other.intervals_) {
      if (cut.hi <= cursor) continue;
      if (cut.lo >= iv.hi) break;
      if (cut.lo > cursor) out.push_back({cursor, cut.lo});
      cursor = std::max(cursor, cut.hi);
      if (cursor >= iv.hi) break;
    }
    if (cursor < iv.hi) out.push_back({cursor, iv.hi});
  }
  return FrequencySet(std::move(out));
}

double FrequencySet::symmetric_difference_measure(
    const FrequencySet& other) const {
  return subtract(other).measure() + other.subtract(*this).measure();
}

bool FrequencySet::is_subset_of(const FrequencySet& other, double tol) const {
  return subtract(other).measure() <= tol;
}

}  // namespace sampcap
