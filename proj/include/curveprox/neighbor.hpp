#pragma once

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace curveprox {

/// Answer of a nearest-neighbor query: the item's position in the input list, its id
/// and a distance whose meaning is documented per structure.
struct Neighbor {
  std::size_t index = 0;
  std::string id;
  double distance = 0.0;
};

/// Position of each id in lexicographic order (stable for repeated ids).
template <typename Item>
std::vector<std::uint32_t> id_ranks(const std::vector<Item>& items) {
  std::vector<std::uint32_t> order(items.size());
  for (std::uint32_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return items[a].id < items[b].id; });
  std::vector<std::uint32_t> rank(items.size());
  for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

}  // namespace curveprox
