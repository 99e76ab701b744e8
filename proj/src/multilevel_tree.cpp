#include "curveprox/multilevel_tree.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace curveprox {

namespace {

std::size_t saturating_add(std::size_t a, std::size_t b) {
  constexpr std::size_t kCap = std::numeric_limits<std::size_t>::max() / 4;
  return std::min(kCap, a + b);
}

class EntryEstimator {
 public:
  EntryEstimator(std::size_t levels, std::size_t nested, std::size_t leaf)
      : levels_(levels), nested_(nested), leaf_(leaf) {}

  std::size_t layer(std::size_t level, std::size_t n) {
    return saturating_add(n, node(level, n));
  }

 private:
  std::size_t node(std::size_t level, std::size_t n) {
    if (n <= leaf_) return 0;
    auto key = std::make_pair(level, n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::size_t cost = assoc(level, n);
    cost = saturating_add(cost, node(level, n / 2));
    cost = saturating_add(cost, node(level, n - n / 2));
    memo_.emplace(key, cost);
    return cost;
  }

  std::size_t assoc(std::size_t level, std::size_t n) {
    if (level + 1 >= levels_) return 0;
    if (level + 1 < nested_) return layer(level + 1, n);
    return n;
  }

  std::size_t levels_;
  std::size_t nested_;
  std::size_t leaf_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo_;
};

}  // namespace

std::size_t MultiLevelTree::estimate_entries(std::size_t levels, std::size_t nested,
                                             std::size_t n, std::size_t leaf_size) {
  if (nested == 0) return n;
  return EntryEstimator(levels, nested, std::max<std::size_t>(leaf_size, 1)).layer(0, n);
}

MultiLevelTree::MultiLevelTree(std::size_t levels, std::vector<double> keys,
                               std::vector<Ranked> scores, Options options)
    : levels_(levels),
      leaf_size_(std::max<std::size_t>(options.leaf_size, 1)),
      keys_(std::move(keys)),
      scores_(std::move(scores)) {
  if (levels_ == 0) throw std::invalid_argument("MultiLevelTree: at least one level required");
  if (keys_.size() != scores_.size() * levels_) {
    throw std::invalid_argument("MultiLevelTree: key table does not match item count");
  }
  if (scores_.size() >= kNone) throw std::invalid_argument("MultiLevelTree: too many items");

  nested_levels_ = std::min(levels_, options.max_nested_levels);
  while (nested_levels_ > 1 &&
         estimate_entries(levels_, nested_levels_, scores_.size(), leaf_size_) >
             options.entry_budget) {
    --nested_levels_;
  }
  if (scores_.empty()) return;

  std::vector<std::uint32_t> all(scores_.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  root_ = nested_levels_ > 0 ? build_layer(0, std::move(all)) : build_kd(0, std::move(all));
}

std::uint32_t MultiLevelTree::build_assoc(std::uint32_t level, std::vector<std::uint32_t> items) {
  return level < nested_levels_ ? build_layer(level, std::move(items))
                                : build_kd(level, std::move(items));
}

std::uint32_t MultiLevelTree::build_layer(std::uint32_t level, std::vector<std::uint32_t> items) {
  std::sort(items.begin(), items.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double ka = key(a, level);
    const double kb = key(b, level);
    return ka < kb || (ka == kb && a < b);
  });
  Layer layer;
  layer.level = level;
  layer.begin = static_cast<std::uint32_t>(item_pool_.size());
  item_pool_.insert(item_pool_.end(), items.begin(), items.end());
  layer.end = static_cast<std::uint32_t>(item_pool_.size());
  const auto index = static_cast<std::uint32_t>(layers_.size());
  layers_.push_back(layer);
  const std::uint32_t root = build_layer_node(layer, layer.begin, layer.end);
  layers_[index].root = root;
  return index;
}

std::uint32_t MultiLevelTree::build_layer_node(const Layer& layer, std::uint32_t begin,
                                               std::uint32_t end) {
  const auto index = static_cast<std::uint32_t>(layer_nodes_.size());
  layer_nodes_.push_back(Node{begin, end, kNone, kNone, kNone, 0, Ranked{}});
  if (end - begin > leaf_size_) {
    const std::uint32_t mid = begin + (end - begin) / 2;
    const std::uint32_t left = build_layer_node(layer, begin, mid);
    const std::uint32_t right = build_layer_node(layer, mid, end);
    std::uint32_t assoc = kNone;
    if (layer.level + 1 < levels_) {
      std::vector<std::uint32_t> subset(item_pool_.begin() + begin, item_pool_.begin() + end);
      assoc = build_assoc(layer.level + 1, std::move(subset));
    }
    Node& node = layer_nodes_[index];
    node.left = left;
    node.right = right;
    node.assoc = assoc;
    const Node& l = layer_nodes_[left];
    const Node& r = layer_nodes_[right];
    if (r.best < l.best) {
      node.best = r.best;
      node.best_item = r.best_item;
    } else {
      node.best = l.best;
      node.best_item = l.best_item;
    }
  } else {
    Node& node = layer_nodes_[index];
    node.best_item = item_pool_[begin];
    node.best = scores_[node.best_item];
    for (std::uint32_t p = begin + 1; p < end; ++p) {
      if (scores_[item_pool_[p]] < node.best) {
        node.best_item = item_pool_[p];
        node.best = scores_[node.best_item];
      }
    }
  }
  return index;
}

std::uint32_t MultiLevelTree::build_kd(std::uint32_t from_level, std::vector<std::uint32_t> items) {
  const auto begin = static_cast<std::uint32_t>(kd_items_.size());
  kd_items_.insert(kd_items_.end(), items.begin(), items.end());
  const auto end = static_cast<std::uint32_t>(kd_items_.size());
  const auto index = static_cast<std::uint32_t>(kds_.size());
  kds_.push_back(Kd{from_level, kNone});
  const std::uint32_t root = build_kd_node(from_level, begin, end);
  kds_[index].root = root;
  return index;
}

std::uint32_t MultiLevelTree::build_kd_node(std::uint32_t from_level, std::uint32_t begin,
                                            std::uint32_t end) {
  const auto index = static_cast<std::uint32_t>(kd_nodes_.size());
  kd_nodes_.push_back(Node{begin, end, kNone, kNone, kNone, 0, Ranked{}});
  kd_box_offset_.push_back(static_cast<std::uint32_t>(kd_boxes_.size()));

  const std::size_t dims = levels_ - from_level;
  std::size_t split_dim = 0;
  double widest = -1.0;
  for (std::size_t d = 0; d < dims; ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::uint32_t p = begin; p < end; ++p) {
      const double k = key(kd_items_[p], from_level + d);
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    kd_boxes_.push_back(lo);
    kd_boxes_.push_back(hi);
    if (hi - lo > widest) {
      widest = hi - lo;
      split_dim = d;
    }
  }

  if (end - begin > leaf_size_) {
    const std::uint32_t mid = begin + (end - begin) / 2;
    const std::size_t level = from_level + split_dim;
    std::nth_element(kd_items_.begin() + begin, kd_items_.begin() + mid, kd_items_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double ka = key(a, level);
                       const double kb = key(b, level);
                       return ka < kb || (ka == kb && a < b);
                     });
    const std::uint32_t left = build_kd_node(from_level, begin, mid);
    const std::uint32_t right = build_kd_node(from_level, mid, end);
    Node& node = kd_nodes_[index];
    node.left = left;
    node.right = right;
    const Node& l = kd_nodes_[left];
    const Node& r = kd_nodes_[right];
    node.best = r.best < l.best ? r.best : l.best;
    node.best_item = r.best < l.best ? r.best_item : l.best_item;
  } else {
    Node& node = kd_nodes_[index];
    node.best_item = kd_items_[begin];
    node.best = scores_[node.best_item];
    for (std::uint32_t p = begin + 1; p < end; ++p) {
      if (scores_[kd_items_[p]] < node.best) {
        node.best_item = kd_items_[p];
        node.best = scores_[node.best_item];
      }
    }
  }
  return index;
}

bool MultiLevelTree::satisfies(std::uint32_t item, std::span<const Bound> bounds,
                               std::size_t from) const {
  for (std::size_t level = from; level < levels_; ++level) {
    if (!bounds[level].contains(key(item, level))) return false;
  }
  return true;
}

struct MultiLevelTree::Search {
  const MultiLevelTree& tree;
  std::span<const Bound> bounds;
  bool collect = false;
  std::optional<TreeHit> best;
  std::vector<std::uint32_t> found;

  bool pruned(const Ranked& lower) const { return !collect && best && !(lower < best->best); }

  void take(const Ranked& score, std::uint32_t item) {
    if (!best || score < best->best) best = TreeHit{score, item};
  }

  void scan(const std::vector<std::uint32_t>& pool, std::uint32_t begin, std::uint32_t end,
            std::size_t from) {
    for (std::uint32_t p = begin; p < end; ++p) {
      const std::uint32_t item = pool[p];
      if (!tree.satisfies(item, bounds, from)) continue;
      if (collect) {
        found.push_back(item);
      } else {
        take(tree.scores_[item], item);
      }
    }
  }

  void take_all(const std::vector<std::uint32_t>& pool, const Node& node) {
    if (collect) {
      found.insert(found.end(), pool.begin() + node.begin, pool.begin() + node.end);
    } else {
      take(node.best, node.best_item);
    }
  }

  void assoc(std::uint32_t level, std::uint32_t index) {
    if (level < tree.nested_levels_) {
      layer(index);
    } else {
      const Kd& kd = tree.kds_[index];
      kd_node(kd.from_level, kd.root);
    }
  }

  void layer(std::uint32_t index) {
    const Layer& layer = tree.layers_[index];
    const Bound& bound = bounds[layer.level];
    const auto first = tree.item_pool_.begin() + layer.begin;
    const auto last = tree.item_pool_.begin() + layer.end;
    const auto lo = std::lower_bound(first, last, bound.lo, [&](std::uint32_t item, double v) {
      return tree.key(item, layer.level) < v;
    });
    const auto hi = std::upper_bound(lo, last, bound.hi, [&](double v, std::uint32_t item) {
      return v < tree.key(item, layer.level);
    });
    if (lo >= hi) return;
    const auto p_lo = static_cast<std::uint32_t>(lo - tree.item_pool_.begin());
    const auto p_hi = static_cast<std::uint32_t>(hi - tree.item_pool_.begin());
    layer_node(layer.root, layer.level, p_lo, p_hi);
  }

  void layer_node(std::uint32_t index, std::uint32_t level, std::uint32_t p_lo,
                  std::uint32_t p_hi) {
    const Node& node = tree.layer_nodes_[index];
    if (node.end <= p_lo || node.begin >= p_hi || pruned(node.best)) return;
    if (p_lo <= node.begin && node.end <= p_hi) {
      // canonical node
      if (level + 1 == tree.levels_) {
        take_all(tree.item_pool_, node);
      } else if (node.assoc != kNone) {
        assoc(level + 1, node.assoc);
      } else {
        scan(tree.item_pool_, node.begin, node.end, level + 1);
      }
      return;
    }
    if (node.left == kNone) {
      scan(tree.item_pool_, std::max(node.begin, p_lo), std::min(node.end, p_hi), level + 1);
      return;
    }
    std::uint32_t first = node.left;
    std::uint32_t second = node.right;
    if (tree.layer_nodes_[second].best < tree.layer_nodes_[first].best) std::swap(first, second);
    layer_node(first, level, p_lo, p_hi);
    layer_node(second, level, p_lo, p_hi);
  }

  void kd_node(std::uint32_t from_level, std::uint32_t index) {
    const Node& node = tree.kd_nodes_[index];
    if (pruned(node.best)) return;
    const double* box = tree.kd_boxes_.data() + tree.kd_box_offset_[index];
    bool inside = true;
    for (std::size_t level = from_level; level < tree.levels_; ++level, box += 2) {
      const Bound& bound = bounds[level];
      if (box[1] < bound.lo || box[0] > bound.hi) return;
      if (box[0] < bound.lo || box[1] > bound.hi) inside = false;
    }
    if (inside) {
      take_all(tree.kd_items_, node);
      return;
    }
    if (node.left == kNone) {
      scan(tree.kd_items_, node.begin, node.end, from_level);
      return;
    }
    std::uint32_t first = node.left;
    std::uint32_t second = node.right;
    if (tree.kd_nodes_[second].best < tree.kd_nodes_[first].best) std::swap(first, second);
    kd_node(from_level, first);
    kd_node(from_level, second);
  }

  void run() {
    if (tree.root_ == kNone) return;
    if (tree.nested_levels_ > 0) {
      layer(tree.root_);
    } else {
      kd_node(0, tree.kds_[tree.root_].root);
    }
  }
};

std::optional<TreeHit> MultiLevelTree::query_min(std::span<const Bound> bounds) const {
  if (bounds.size() != levels_) throw std::invalid_argument("MultiLevelTree: bound count mismatch");
  Search search{*this, bounds, false, std::nullopt, {}};
  search.run();
  return search.best;
}

std::vector<std::uint32_t> MultiLevelTree::report(std::span<const Bound> bounds) const {
  if (bounds.size() != levels_) throw std::invalid_argument("MultiLevelTree: bound count mismatch");
  Search search{*this, bounds, true, std::nullopt, {}};
  search.run();
  std::sort(search.found.begin(), search.found.end());
  return std::move(search.found);
}

}  // namespace curveprox
