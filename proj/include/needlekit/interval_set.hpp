#pragma once

#include <cstddef>
#include <vector>

namespace needlekit {

/// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
  double lo;
  double hi;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite disjoint union of closed intervals, sorted, with positive gaps.
/// Zero-length intervals are dropped and touching or overlapping ones merged
/// on construction.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> intervals);
  IntervalSet(std::initializer_list<Interval> intervals)
      : IntervalSet(std::vector<Interval>(intervals)) {}

  static IntervalSet left_half_line(double b);   // (-inf, b]
  static IntervalSet right_half_line(double a);  // [a, +inf)

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }

  double inf() const;
  double sup() const;
  bool contains(double x) const;

  IntervalSet clipped(double lo, double hi) const;
  /// Points within distance eps of the set (closure of the open neighbourhood).
  IntervalSet neighborhood(double eps) const;
  IntervalSet translated(double tau) const;
  /// Image under t -> -t.
  IntervalSet reflected() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

}  // namespace needlekit
