#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "curveprox/geometry.hpp"

namespace curveprox {

/// Discrete Fréchet distance by dynamic programming over the full alignment lattice.
double dfd_dp(std::span<const Point> p, std::span<const Point> q, Metric metric);
double dfd_dp(const Curve& c1, const Curve& c2, Metric metric);

struct SegmentMatch {
  double distance = 0.0;
  /// Prefix length i of the optimal partition C[1,i] | C[i+1,m]; 0 when m = 1.
  std::size_t split = 0;
};

/// Distance between segment ab and a curve via the prefix/suffix characterization.
/// The smallest optimal split is reported. Single-vertex curves fall back to dfd_dp.
SegmentMatch dfd_segment_curve(Point a, Point b, std::span<const Point> curve, Metric metric);
SegmentMatch dfd_segment_curve(const Segment& s, const Curve& curve, Metric metric);

/// Bounding boxes of every prefix C[1,i] and suffix C[i+1,m], i = 1..m-1.
///
/// The rectangle R_i(d) (intersection of radius-d squares around the prefix) is
/// [prefix.max_x - d, prefix.min_x + d] x [prefix.max_y - d, prefix.min_y + d]; note
/// the left edge comes from the right-most prefix vertex.
class PartitionProfile {
 public:
  explicit PartitionProfile(std::span<const Point> vertices);

  std::size_t vertex_count() const { return prefix_.size() + 1; }
  std::size_t split_count() const { return prefix_.size(); }
  /// i is a prefix length in [1, split_count()].
  const Box& prefix(std::size_t i) const { return prefix_[i - 1]; }
  const Box& suffix(std::size_t i) const { return suffix_[i - 1]; }

 private:
  std::vector<Box> prefix_;
  std::vector<Box> suffix_;
};

PartitionProfile partition_profile(const Curve& curve);

}  // namespace curveprox
