#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace curveprox {

/// Closed interval constraint on one level key; infinite ends make it one-sided.
struct Bound {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Bound at_most(double v) { return {-std::numeric_limits<double>::infinity(), v}; }
  static Bound at_least(double v) { return {v, std::numeric_limits<double>::infinity()}; }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Aggregate carried by every item; queries return the minimum in (key, id) order.
struct Ranked {
  double key = 0.0;
  std::uint32_t id = 0;

  friend auto operator<=>(const Ranked&, const Ranked&) = default;
};

struct TreeHit {
  Ranked best;
  std::uint32_t item = 0;
};

/// Static nested balanced search tree over items with one key per level.
///
/// A query supplies one closed interval per level and asks for the minimum-score item
/// whose keys all fall in their intervals. Level 0 is a balanced tree over the level-0
/// keys; every internal node owns an associated tree over its canonical subset keyed by
/// the next level, and so on. Subsets of at most `leaf_size` items are scanned.
///
/// Fully nesting L levels costs O(N log^(L-1) N) entries, so only the first
/// `nested_levels()` levels are materialized as nested trees (chosen from
/// `entry_budget`); canonical subsets at the cut get a box-pruned k-d tree over the
/// remaining level keys. Answers are exact either way.
class MultiLevelTree {
 public:
  struct Options {
    std::size_t leaf_size = 8;
    std::size_t max_nested_levels = std::numeric_limits<std::size_t>::max();
    std::size_t entry_budget = std::size_t{1} << 23;
  };

  MultiLevelTree() = default;
  /// `keys` is row-major: keys[item * levels + level].
  MultiLevelTree(std::size_t levels, std::vector<double> keys, std::vector<Ranked> scores,
                 Options options);
  MultiLevelTree(std::size_t levels, std::vector<double> keys, std::vector<Ranked> scores)
      : MultiLevelTree(levels, std::move(keys), std::move(scores), Options{}) {}

  std::size_t size() const { return scores_.size(); }
  std::size_t levels() const { return levels_; }
  std::size_t nested_levels() const { return nested_levels_; }
  /// Item indices stored across all nested trees and k-d terminals.
  std::size_t stored_entries() const { return item_pool_.size() + kd_items_.size(); }

  double key(std::size_t item, std::size_t level) const { return keys_[item * levels_ + level]; }
  const Ranked& score(std::size_t item) const { return scores_[item]; }

  /// Minimum-score item satisfying every bound, if any. `bounds.size() == levels()`.
  std::optional<TreeHit> query_min(std::span<const Bound> bounds) const;
  bool any(std::span<const Bound> bounds) const { return query_min(bounds).has_value(); }
  /// Every item satisfying the bounds, gathered from canonical subsets (sorted).
  std::vector<std::uint32_t> report(std::span<const Bound> bounds) const;

  /// Estimated stored entries when nesting `nested` levels over `n` items.
  static std::size_t estimate_entries(std::size_t levels, std::size_t nested, std::size_t n,
                                      std::size_t leaf_size);

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    std::uint32_t begin = 0;  // range in item_pool_ (layer nodes) or kd_items_ (kd nodes)
    std::uint32_t end = 0;
    std::uint32_t left = kNone;
    std::uint32_t right = kNone;
    std::uint32_t assoc = kNone;  // layer or kd root for the next level (layer nodes only)
    std::uint32_t best_item = 0;
    Ranked best;
  };

  struct Layer {
    std::uint32_t level = 0;
    std::uint32_t root = kNone;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
  };

  struct Kd {
    std::uint32_t from_level = 0;
    std::uint32_t root = kNone;
  };

  struct Search;

  std::uint32_t build_layer(std::uint32_t level, std::vector<std::uint32_t> items);
  std::uint32_t build_layer_node(const Layer& layer, std::uint32_t begin, std::uint32_t end);
  std::uint32_t build_kd(std::uint32_t from_level, std::vector<std::uint32_t> items);
  std::uint32_t build_kd_node(std::uint32_t from_level, std::uint32_t begin, std::uint32_t end);
  std::uint32_t build_assoc(std::uint32_t level, std::vector<std::uint32_t> items);

  bool satisfies(std::uint32_t item, std::span<const Bound> bounds, std::size_t from) const;

  std::size_t levels_ = 0;
  std::size_t leaf_size_ = 8;
  std::size_t nested_levels_ = 0;
  std::vector<double> keys_;
  std::vector<Ranked> scores_;

  std::vector<std::uint32_t> item_pool_;
  std::vector<Node> layer_nodes_;
  std::vector<Layer> layers_;

  std::vector<std::uint32_t> kd_items_;
  std::vector<Node> kd_nodes_;
  std::vector<double> kd_boxes_;  // per kd node: (min, max) for each level >= from_level
  std::vector<std::uint32_t> kd_box_offset_;
  std::vector<Kd> kds_;

  // Root structure: a layer when nested_levels_ > 0, otherwise a k-d terminal.
  std::uint32_t root_ = kNone;
};

}  // namespace curveprox
