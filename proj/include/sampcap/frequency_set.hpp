#pragma once

#include <span>
#include <vector>

namespace sampcap {

// Closed frequency interval [lo, hi] in Hz.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  double center() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double f) const noexcept { return f >= lo && f <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of disjoint closed intervals. Overlapping or touching inputs
// are merged on construction, so intervals() is always sorted, pairwise
// disjoint and non-adjacent. Zero-length inputs are dropped (measure zero).
class FrequencySet {
 public:
  FrequencySet() = default;
  explicit FrequencySet(std::vector<Interval> intervals);

  std::span<const Interval> intervals() const noexcept { return intervals_; }
  double measure() const noexcept { return measure_; }
  bool empty() const noexcept { return intervals_.empty(); }

  bool contains(double f) const noexcept;

  // Lebesgue measure of the intersection with [iv.lo, iv.hi].
  double overlap(Interval iv) const noexcept;

  FrequencySet intersect(const FrequencySet& other) const;
  FrequencySet unite(const FrequencySet& other) const;
  FrequencySet subtract(const FrequencySet& other) const;

  double symmetric_difference_measure(const FrequencySet& other) const;

  // True when the part of *this outside `other` has measure <= tol.
  bool is_subset_of(const FrequencySet& other, double tol = 0.0) const;

  friend bool operator==(const FrequencySet& a, const FrequencySet& b) {
    return a.intervals_ == b.intervals_;
  }

 private:
  std::vector<Interval> intervals_;
  double measure_ = 0.0;
};

}  // namespace sampcap
