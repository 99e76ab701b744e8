#pragma once

#include <optional>
#include <vector>

#include "curveprox/frechet.hpp"
#include "curveprox/geometry.hpp"
#include "curveprox/multilevel_tree.hpp"
#include "curveprox/neighbor.hpp"

namespace curveprox {

/// Exact L∞ nearest curve to a query segment.
///
/// Every split (curve j, i) is one item of an 8-level tree keyed by the prefix and
/// suffix extrema (preMaxX, preMinX, preMaxY, preMinY, sufMaxX, sufMinX, sufMaxY,
/// sufMinY). A segment ab is within d of curve j iff some split has a in R_i(d) and b in
/// the suffix rectangle, which is eight one-sided range conditions on those keys.
class SegmentQueryIndex {
 public:
  explicit SegmentQueryIndex(std::vector<Curve> curves,
                             MultiLevelTree::Options options = MultiLevelTree::Options{});

  std::size_t curve_count() const { return curves_.size(); }
  std::size_t key_count() const { return tree_.size(); }
  const MultiLevelTree& tree() const { return tree_; }
  const std::vector<Curve>& curves() const { return curves_; }

  /// Index of the smallest-id curve within L∞ distance d of s, if any.
  std::optional<std::size_t> decide(const Segment& s, double d) const;
  /// Nearest curve with its exact distance; ties go to the smallest id.
  Neighbor nearest(const Segment& s) const;

 private:
  std::vector<Curve> curves_;
  std::vector<std::uint32_t> rank_;
  std::vector<std::uint32_t> by_rank_;
  std::vector<std::uint32_t> owner_;  // item -> curve index
  MultiLevelTree tree_;
  std::vector<double> xs_;  // every vertex x, sorted
  std::vector<double> ys_;
};

/// Axis-parallel rectangle pair for endpoint queries: a must lie in `start`, b in `end`.
struct RectanglePair {
  Box start;
  Box end;
};

/// Exact L∞ nearest segment to a query curve, over a 4-level tree on (a.x, a.y, b.x, b.y).
class SegmentEndpointTree {
 public:
  explicit SegmentEndpointTree(std::vector<Segment> segments,
                               MultiLevelTree::Options options = MultiLevelTree::Options{});

  std::size_t segment_count() const { return segments_.size(); }
  const std::vector<Segment>& segments() const { return segments_; }

  /// Indices of all segments with a in pair.start and b in pair.end, ascending.
  std::vector<std::size_t> report(const RectanglePair& pair) const;
  /// Smallest-id segment with a in pair.start and b in pair.end.
  std::optional<std::size_t> first(const RectanglePair& pair) const;

  /// Index of the smallest-id segment within L∞ distance d of q, if any.
  std::optional<std::size_t> decide(const Curve& q, double d) const;
  Neighbor nearest(const Curve& q) const;

 private:
  std::optional<TreeHit> probe(const RectanglePair& pair) const;

  std::vector<Segment> segments_;
  std::vector<std::uint32_t> by_rank_;
  MultiLevelTree tree_;
};

/// Rectangles R_i(d) and the suffix counterpart for split i of a profile.
RectanglePair split_rectangles(const PartitionProfile& profile, std::size_t i, double d);

}  // namespace curveprox
