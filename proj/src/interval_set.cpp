#include "needlekit/interval_set.hpp"

#include <algorithm>
#include <cmath>

#include "needlekit/error.hpp"
#include "needlekit/logspace.hpp"

namespace needlekit {

IntervalSet::IntervalSet(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    require(!std::isnan(iv.lo) && !std::isnan(iv.hi), "interval endpoint is NaN");
    require(iv.lo <= iv.hi, "interval has lo > hi");
  }
  std::erase_if(intervals, [](const Interval& iv) { return iv.lo == iv.hi; });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
    } else {
      intervals_.push_back(iv);
    }
  }
}

IntervalSet IntervalSet::left_half_line(double b) { return IntervalSet{{-kInf, b}}; }

IntervalSet IntervalSet::right_half_line(double a) { return IntervalSet{{a, kInf}}; }

double IntervalSet::inf() const {
  require(!empty(), "inf of empty interval set");
  return intervals_.front().lo;
}

double IntervalSet::sup() const {
  require(!empty(), "sup of empty interval set");
  return intervals_.back().hi;
}

bool IntervalSet::contains(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& iv) { return iv.lo <= x && x <= iv.hi; });
}

IntervalSet IntervalSet::clipped(double lo, double hi) const {
  std::vector<Interval> out;
  for (const auto& iv : intervals_) {
    const double a = std::max(iv.lo, lo);
    const double b = std::min(iv.hi, hi);
    if (a < b) out.push_back({a, b});
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::neighborhood(double eps) const {
  require(eps >= 0.0, "neighborhood radius must be non-negative");
  std::vector<Interval> out;
  out.reserve(intervals_.size());
  for (const auto& iv : intervals_) out.push_back({iv.lo - eps, iv.hi + eps});
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::translated(double tau) const {
  std::vector<Interval> out;
  out.reserve(intervals_.size());
  for (const auto& iv : intervals_) out.push_back({iv.lo + tau, iv.hi + tau});
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::reflected() const {
  std::vector<Interval> out;
  out.reserve(intervals_.size());
  for (const auto& iv : intervals_) out.push_back({-iv.hi, -iv.lo});
  return IntervalSet(std::move(out));
}

}  // namespace needlekit
