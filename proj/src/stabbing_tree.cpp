#include "curveprox/stabbing_tree.hpp"

#include <algorithm>

namespace curveprox {

namespace {

// Positions 2k are the coordinates themselves, 2k+1 the open gaps between them.
std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

long slots(const std::vector<double>& coords) { return 2 * static_cast<long>(coords.size()) - 1; }

long exact_position(const std::vector<double>& coords, double v) {
  return 2 * (std::lower_bound(coords.begin(), coords.end(), v) - coords.begin());
}

}  // namespace

long StabbingTree::position(const std::vector<double>& coords, double v) {
  if (coords.empty() || v < coords.front() || v > coords.back()) return -1;
  const auto it = std::lower_bound(coords.begin(), coords.end(), v);
  const long k = it - coords.begin();
  return *it == v ? 2 * k : 2 * k - 1;
}

void StabbingTree::insert(std::vector<std::vector<std::uint32_t>>& nodes, std::size_t node,
                          long lo, long hi, long from, long to, std::uint32_t id) {
  if (to < lo || hi < from) return;
  if (from <= lo && hi <= to) {
    nodes[node].push_back(id);
    return;
  }
  const long mid = lo + (hi - lo) / 2;
  insert(nodes, 2 * node, lo, mid, from, to, id);
  insert(nodes, 2 * node + 1, mid + 1, hi, from, to, id);
}

StabbingTree::StabbingTree(const std::vector<Box>& rects) : count_(rects.size()) {
  if (rects.empty()) return;
  std::vector<double> xs;
  for (const Box& r : rects) {
    xs.push_back(r.min_x);
    xs.push_back(r.max_x);
  }
  xs_ = sorted_unique(std::move(xs));
  const long nx = slots(xs_);
  outer_.assign(4 * static_cast<std::size_t>(nx) + 4, {});
  for (std::uint32_t id = 0; id < rects.size(); ++id) {
    insert(outer_, 1, 0, nx - 1, exact_position(xs_, rects[id].min_x),
           exact_position(xs_, rects[id].max_x), id);
  }
  inner_.resize(outer_.size());
  for (std::size_t node = 0; node < outer_.size(); ++node) {
    if (outer_[node].empty()) continue;
    Inner& inner = inner_[node];
    std::vector<double> ys;
    for (std::uint32_t id : outer_[node]) {
      ys.push_back(rects[id].min_y);
      ys.push_back(rects[id].max_y);
    }
    inner.coords = sorted_unique(std::move(ys));
    const long ny = slots(inner.coords);
    inner.nodes.assign(4 * static_cast<std::size_t>(ny) + 4, {});
    for (std::uint32_t id : outer_[node]) {
      insert(inner.nodes, 1, 0, ny - 1, exact_position(inner.coords, rects[id].min_y),
             exact_position(inner.coords, rects[id].max_y), id);
    }
  }
}

std::vector<std::uint32_t> StabbingTree::stab(Point p) const {
  std::vector<std::uint32_t> out;
  const long px = position(xs_, p.x);
  if (px < 0) return out;
  std::size_t node = 1;
  long lo = 0;
  long hi = slots(xs_) - 1;
  while (true) {
    if (!outer_[node].empty()) {
      const Inner& inner = inner_[node];
      const long py = position(inner.coords, p.y);
      if (py >= 0) {
        std::size_t in = 1;
        long ylo = 0;
        long yhi = slots(inner.coords) - 1;
        while (true) {
          out.insert(out.end(), inner.nodes[in].begin(), inner.nodes[in].end());
          if (ylo == yhi) break;
          const long mid = ylo + (yhi - ylo) / 2;
          if (py <= mid) {
            in = 2 * in;
            yhi = mid;
          } else {
            in = 2 * in + 1;
            ylo = mid + 1;
          }
        }
      }
    }
    if (lo == hi) break;
    const long mid = lo + (hi - lo) / 2;
    if (px <= mid) {
      node = 2 * node;
      hi = mid;
    } else {
      node = 2 * node + 1;
      lo = mid + 1;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace curveprox
