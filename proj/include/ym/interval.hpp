#pragma once

#include <algorithm>

namespace ym {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double y) const noexcept { return lo <= y && y <= hi; }
  bool empty() const noexcept { return !(lo < hi); }

  Interval intersect(const Interval& other) const noexcept {
    return {std::max(lo, other.lo), std::min(hi, other.hi)};
  }
  Interval hull(const Interval& other) const noexcept {
    return {std::min(lo, other.lo), std::max(hi, other.hi)};
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace ym
