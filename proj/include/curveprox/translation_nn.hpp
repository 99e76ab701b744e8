#pragma once

#include <array>
#include <optional>
#include <vector>

#include "curveprox/frechet.hpp"
#include "curveprox/geometry.hpp"
#include "curveprox/multilevel_tree.hpp"
#include "curveprox/neighbor.hpp"

namespace curveprox {

/// Per-split translation key of a curve: r is the larger smallest-enclosing-square
/// radius of prefix and suffix, u1..u4 the gap and span values along x and y.
struct TranslationKey {
  double r = 0.0;
  double u1 = 0.0;  // sufMinX - preMaxX
  double u2 = 0.0;  // sufMaxX - preMinX
  double u3 = 0.0;  // sufMinY - preMaxY
  double u4 = 0.0;  // sufMaxY - preMinY
};

TranslationKey translation_key(const PartitionProfile& profile, std::size_t i);

/// Smallest d for which some translation of ab is within L∞ distance d of the split.
double translation_split_distance(const TranslationKey& key, Point delta);

/// min over translations t of the L∞ discrete Fréchet distance between s + t and c.
double translation_distance(const Segment& s, const Curve& c);

/// Nearest curve to a query segment under translation (L∞).
///
/// Four 5-level trees, one per orientation of b - a, keyed by r and the orientation
/// adjusted span values.
class SegmentTranslationIndex {
 public:
  explicit SegmentTranslationIndex(std::vector<Curve> curves,
                                   MultiLevelTree::Options options = MultiLevelTree::Options{});

  std::size_t curve_count() const { return curves_.size(); }
  std::size_t key_count() const { return keys_.size(); }
  const std::vector<TranslationKey>& keys() const { return keys_; }

  std::optional<std::size_t> decide(const Segment& s, double d) const;
  Neighbor nearest(const Segment& s) const;

 private:
  struct Orientation {
    MultiLevelTree tree;
    std::array<std::vector<double>, 5> sorted;  // r, k1, k2, k3, k4
  };

  static std::size_t orientation_of(const Segment& s);

  std::vector<Curve> curves_;
  std::vector<std::uint32_t> by_rank_;
  std::vector<TranslationKey> keys_;
  std::array<Orientation, 4> trees_;
};

/// Nearest segment to a query curve under translation (L∞), via difference points
/// c = b - a: a 2-level range tree for containment and four 3-level wedge trees.
class SegmentTranslationTree {
 public:
  explicit SegmentTranslationTree(std::vector<Segment> segments,
                                  MultiLevelTree::Options options = MultiLevelTree::Options{});

  std::size_t segment_count() const { return segments_.size(); }
  const std::vector<Point>& differences() const { return diffs_; }

  /// Smallest-id segment whose difference point lies in the closed rectangle.
  std::optional<std::size_t> first_in(const Box& rect) const;

  enum class Edge { kRight, kLeft, kTop, kBottom };
  /// Segment whose difference point is first swept when the rectangle's edge moves
  /// outward; returns the index and the sweep distance.
  std::optional<std::pair<std::size_t, double>> first_beyond(const Box& rect, Edge edge) const;

  /// Index of the smallest-id segment within translation distance d of q, if any.
  std::optional<std::size_t> decide(const Curve& q, double d) const;
  Neighbor nearest(const Curve& q) const;

 private:
  std::vector<Segment> segments_;
  std::vector<Point> diffs_;
  std::vector<std::uint32_t> rank_;
  std::vector<std::uint32_t> by_rank_;
  MultiLevelTree range_;
  std::array<MultiLevelTree, 4> edges_;
};

}  // namespace curveprox
