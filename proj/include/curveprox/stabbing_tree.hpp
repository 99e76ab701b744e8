#pragma once

#include <cstdint>
#include <vector>

#include "curveprox/geometry.hpp"

namespace curveprox {

/// Two-level segment tree over closed axis-parallel rectangles: the outer tree splits
/// x into elementary intervals, and each canonical node holds a segment tree on y.
class StabbingTree {
 public:
  StabbingTree() = default;
  explicit StabbingTree(const std::vector<Box>& rects);

  std::size_t size() const { return count_; }
  /// Indices of every rectangle containing p, ascending.
  std::vector<std::uint32_t> stab(Point p) const;

 private:
  struct Inner {
    std::vector<double> coords;
    std::vector<std::vector<std::uint32_t>> nodes;  // heap-indexed lists
  };

  static long position(const std::vector<double>& coords, double v);
  static void insert(std::vector<std::vector<std::uint32_t>>& nodes, std::size_t node, long lo,
                     long hi, long from, long to, std::uint32_t id);

  std::size_t count_ = 0;
  std::vector<double> xs_;
  std::vector<std::vector<std::uint32_t>> outer_;
  std::vector<Inner> inner_;
};

}  // namespace curveprox
