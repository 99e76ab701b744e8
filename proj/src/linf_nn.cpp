#include "curveprox/linf_nn.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "curveprox/candidate_search.hpp"

namespace curveprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_splittable(const Curve& curve) {
  validate(curve);
  if (curve.size() < 2) {
    throw BuildError("curve '" + curve.id + "' has a single vertex and cannot be split");
  }
}

void require_distance(double d) {
  if (!(d >= 0.0)) throw InvalidInput("query distance must be non-negative");
}

}  // namespace

RectanglePair split_rectangles(const PartitionProfile& profile, std::size_t i, double d) {
  const Box& pre = profile.prefix(i);
  const Box& suf = profile.suffix(i);
  return {Box{pre.max_x - d, pre.min_x + d, pre.max_y - d, pre.min_y + d},
          Box{suf.max_x - d, suf.min_x + d, suf.max_y - d, suf.min_y + d}};
}

SegmentQueryIndex::SegmentQueryIndex(std::vector<Curve> curves, MultiLevelTree::Options options)
    : curves_(std::move(curves)) {
  for (const Curve& c : curves_) require_splittable(c);
  rank_ = id_ranks(curves_);
  by_rank_.resize(curves_.size());
  for (std::uint32_t j = 0; j < curves_.size(); ++j) by_rank_[rank_[j]] = j;

  std::vector<double> keys;
  std::vector<Ranked> scores;
  for (std::uint32_t j = 0; j < curves_.size(); ++j) {
    const PartitionProfile profile(curves_[j].vertices);
    for (std::size_t i = 1; i <= profile.split_count(); ++i) {
      const Box& pre = profile.prefix(i);
      const Box& suf = profile.suffix(i);
      keys.insert(keys.end(), {pre.max_x, pre.min_x, pre.max_y, pre.min_y, suf.max_x, suf.min_x,
                               suf.max_y, suf.min_y});
      scores.push_back(Ranked{0.0, rank_[j]});
      owner_.push_back(j);
    }
    for (const Point& p : curves_[j].vertices) {
      xs_.push_back(p.x);
      ys_.push_back(p.y);
    }
  }
  std::sort(xs_.begin(), xs_.end());
  std::sort(ys_.begin(), ys_.end());
  tree_ = MultiLevelTree(8, std::move(keys), std::move(scores), options);
}

std::optional<std::size_t> SegmentQueryIndex::decide(const Segment& s, double d) const {
  require_distance(d);
  const std::array<Bound, 8> bounds{
      Bound::at_most(s.a.x + d), Bound::at_least(s.a.x - d),
      Bound::at_most(s.a.y + d), Bound::at_least(s.a.y - d),
      Bound::at_most(s.b.x + d), Bound::at_least(s.b.x - d),
      Bound::at_most(s.b.y + d), Bound::at_least(s.b.y - d)};
  const auto hit = tree_.query_min(bounds);
  if (!hit) return std::nullopt;
  return by_rank_[hit->best.id];
}

Neighbor SegmentQueryIndex::nearest(const Segment& s) const {
  if (curves_.empty()) throw InvalidInput("nearest: the index holds no curves");
  validate(s);
  auto accept = [&](double d) { return decide(s, d).has_value(); };
  double best = kInf;
  auto search = [&](const std::vector<double>& coords, double origin) {
    const std::size_t n = coords.size();
    auto above = [&](std::size_t k) { return coords[k] - origin; };
    auto below = [&](std::size_t k) { return origin - coords[n - 1 - k]; };
    if (auto d = smallest_accepted(n, above, accept, best)) best = *d;
    if (auto d = smallest_accepted(n, below, accept, best)) best = *d;
  };
  search(xs_, s.a.x);
  search(xs_, s.b.x);
  search(ys_, s.a.y);
  search(ys_, s.b.y);
  const auto winner = decide(s, best);
  if (!winner) throw std::logic_error("nearest: candidate search lost its witness");
  const Curve& c = curves_[*winner];
  return {*winner, c.id, dfd_segment_curve(s, c, Metric::kLinf).distance};
}

SegmentEndpointTree::SegmentEndpointTree(std::vector<Segment> segments,
                                         MultiLevelTree::Options options)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw BuildError("segment index needs at least one segment");
  for (const Segment& s : segments_) validate(s);
  const auto rank = id_ranks(segments_);
  by_rank_.resize(segments_.size());
  std::vector<double> keys;
  std::vector<Ranked> scores;
  for (std::uint32_t k = 0; k < segments_.size(); ++k) {
    by_rank_[rank[k]] = k;
    const Segment& s = segments_[k];
    keys.insert(keys.end(), {s.a.x, s.a.y, s.b.x, s.b.y});
    scores.push_back(Ranked{0.0, rank[k]});
  }
  tree_ = MultiLevelTree(4, std::move(keys), std::move(scores), options);
}

namespace {

std::array<Bound, 4> endpoint_bounds(const RectanglePair& pair) {
  return {Bound{pair.start.min_x, pair.start.max_x}, Bound{pair.start.min_y, pair.start.max_y},
          Bound{pair.end.min_x, pair.end.max_x}, Bound{pair.end.min_y, pair.end.max_y}};
}

}  // namespace

std::optional<TreeHit> SegmentEndpointTree::probe(const RectanglePair& pair) const {
  return tree_.query_min(endpoint_bounds(pair));
}

std::vector<std::size_t> SegmentEndpointTree::report(const RectanglePair& pair) const {
  const auto items = tree_.report(endpoint_bounds(pair));
  return {items.begin(), items.end()};
}

std::optional<std::size_t> SegmentEndpointTree::first(const RectanglePair& pair) const {
  const auto hit = probe(pair);
  if (!hit) return std::nullopt;
  return by_rank_[hit->best.id];
}

std::optional<std::size_t> SegmentEndpointTree::decide(const Curve& q, double d) const {
  require_distance(d);
  validate(q);
  if (q.size() < 2) throw InvalidInput("query curve '" + q.id + "' needs at least 2 vertices");
  const PartitionProfile profile(q.vertices);
  std::optional<std::uint32_t> best;
  for (std::size_t i = 1; i <= profile.split_count(); ++i) {
    const auto hit = probe(split_rectangles(profile, i, d));
    if (hit && (!best || hit->best.id < *best)) best = hit->best.id;
  }
  if (!best) return std::nullopt;
  return by_rank_[*best];
}

Neighbor SegmentEndpointTree::nearest(const Curve& q) const {
  validate(q);
  if (q.size() < 2) throw InvalidInput("query curve '" + q.id + "' needs at least 2 vertices");
  const PartitionProfile profile(q.vertices);
  // side families: extremum - endpoint coordinate, or endpoint coordinate - extremum
  std::array<std::vector<double>, 8> families;
  for (std::size_t i = 1; i <= profile.split_count(); ++i) {
    const Box& pre = profile.prefix(i);
    const Box& suf = profile.suffix(i);
    for (const Segment& s : segments_) {
      const std::array<double, 8> terms{pre.max_x - s.a.x, s.a.x - pre.min_x, pre.max_y - s.a.y,
                                        s.a.y - pre.min_y, suf.max_x - s.b.x, s.b.x - suf.min_x,
                                        suf.max_y - s.b.y, s.b.y - suf.min_y};
      for (std::size_t f = 0; f < 8; ++f) {
        if (terms[f] >= 0.0) families[f].push_back(terms[f]);
      }
    }
  }
  auto accept = [&](double d) { return decide(q, d).has_value(); };
  double best = kInf;
  for (auto& family : families) {
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    auto value = [&](std::size_t k) { return family[k]; };
    if (auto d = smallest_accepted(family.size(), value, accept, best)) best = *d;
  }
  const auto winner = decide(q, best);
  if (!winner) throw std::logic_error("nearest: candidate search lost its witness");
  const Segment& s = segments_[*winner];
  return {*winner, s.id, dfd_segment_curve(s, q, Metric::kLinf).distance};
}

}  // namespace curveprox
