#pragma once

#include <cstddef>
#include <optional>

namespace curveprox {

/// Smallest value among value(0) <= value(1) <= ... <= value(count-1) that is
/// non-negative, strictly below `limit`, and accepted by the monotone predicate.
template <typename Value, typename Accept>
std::optional<double> smallest_accepted(std::size_t count, Value value, Accept accept,
                                        double limit) {
  auto first_at_least = [&](double threshold) {
    std::size_t lo = 0;
    std::size_t hi = count;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (value(mid) < threshold) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo;
  };
  std::size_t lo = first_at_least(0.0);
  std::size_t hi = first_at_least(limit);
  if (lo >= hi || !accept(value(hi - 1))) return std::nullopt;
  --hi;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (accept(value(mid))) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return value(lo);
}

}  // namespace curveprox
