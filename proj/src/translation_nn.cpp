#include "curveprox/translation_nn.hpp"

#include <algorithm>
#include <limits>

#include "curveprox/candidate_search.hpp"

namespace curveprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_query_curve(const Curve& q) {
  validate(q);
  if (q.size() < 2) throw InvalidInput("query curve '" + q.id + "' needs at least 2 vertices");
}

}  // namespace

TranslationKey translation_key(const PartitionProfile& profile, std::size_t i) {
  const Box& pre = profile.prefix(i);
  const Box& suf = profile.suffix(i);
  return {std::max(pre.square_radius(), suf.square_radius()), suf.min_x - pre.max_x,
          suf.max_x - pre.min_x, suf.min_y - pre.max_y, suf.max_y - pre.min_y};
}

double translation_split_distance(const TranslationKey& key, Point delta) {
  return std::max({key.r, (delta.x - key.u1) / 2, (key.u2 - delta.x) / 2, (delta.y - key.u3) / 2,
                   (key.u4 - delta.y) / 2});
}

double translation_distance(const Segment& s, const Curve& c) {
  validate(c);
  const Point delta = s.b - s.a;
  if (c.size() < 2) return std::max(std::abs(delta.x), std::abs(delta.y)) / 2;
  const PartitionProfile profile(c.vertices);
  double best = kInf;
  for (std::size_t i = 1; i <= profile.split_count(); ++i) {
    best = std::min(best, translation_split_distance(translation_key(profile, i), delta));
  }
  return best;
}

SegmentTranslationIndex::SegmentTranslationIndex(std::vector<Curve> curves,
                                                 MultiLevelTree::Options options)
    : curves_(std::move(curves)) {
  for (const Curve& c : curves_) {
    validate(c);
    if (c.size() < 2) throw BuildError("curve '" + c.id + "' has a single vertex and cannot be split");
  }
  const auto rank = id_ranks(curves_);
  by_rank_.resize(curves_.size());
  std::vector<Ranked> scores;
  for (std::uint32_t j = 0; j < curves_.size(); ++j) {
    by_rank_[rank[j]] = j;
    const PartitionProfile profile(curves_[j].vertices);
    for (std::size_t i = 1; i <= profile.split_count(); ++i) {
      keys_.push_back(translation_key(profile, i));
      scores.push_back(Ranked{0.0, rank[j]});
    }
  }
  for (std::size_t o = 0; o < 4; ++o) {
    const bool flip_x = o & 2;
    const bool flip_y = o & 1;
    std::vector<double> table;
    table.reserve(keys_.size() * 5);
    Orientation& orient = trees_[o];
    for (const TranslationKey& k : keys_) {
      const double k1 = flip_x ? -k.u2 : k.u1;
      const double k2 = flip_x ? -k.u1 : k.u2;
      const double k3 = flip_y ? -k.u4 : k.u3;
      const double k4 = flip_y ? -k.u3 : k.u4;
      table.insert(table.end(), {k.r, k1, k2, k3, k4});
      const double row[5] = {k.r, k1, k2, k3, k4};
      for (std::size_t l = 0; l < 5; ++l) orient.sorted[l].push_back(row[l]);
    }
    for (auto& column : orient.sorted) std::sort(column.begin(), column.end());
    orient.tree = MultiLevelTree(5, std::move(table), scores, options);
  }
}

std::size_t SegmentTranslationIndex::orientation_of(const Segment& s) {
  return (s.b.x < s.a.x ? 2 : 0) + (s.b.y < s.a.y ? 1 : 0);
}

std::optional<std::size_t> SegmentTranslationIndex::decide(const Segment& s, double d) const {
  if (!(d >= 0.0)) throw InvalidInput("query distance must be non-negative");
  const double dx = std::abs(s.b.x - s.a.x);
  const double dy = std::abs(s.b.y - s.a.y);
  const std::array<Bound, 5> bounds{Bound::at_most(d), Bound::at_least(dx - 2 * d),
                                    Bound::at_most(dx + 2 * d), Bound::at_least(dy - 2 * d),
                                    Bound::at_most(dy + 2 * d)};
  const auto hit = trees_[orientation_of(s)].tree.query_min(bounds);
  if (!hit) return std::nullopt;
  return by_rank_[hit->best.id];
}

Neighbor SegmentTranslationIndex::nearest(const Segment& s) const {
  if (curves_.empty()) throw InvalidInput("nearest: the index holds no curves");
  validate(s);
  const Orientation& orient = trees_[orientation_of(s)];
  const double dx = std::abs(s.b.x - s.a.x);
  const double dy = std::abs(s.b.y - s.a.y);
  auto accept = [&](double d) { return decide(s, d).has_value(); };
  double best = kInf;
  auto consider = [&](std::size_t count, auto value) {
    if (auto d = smallest_accepted(count, value, accept, best)) best = *d;
  };
  const std::size_t n = keys_.size();
  const auto& col = orient.sorted;
  consider(n, [&](std::size_t k) { return col[0][k]; });
  consider(n, [&](std::size_t k) { return (dx - col[1][n - 1 - k]) / 2; });
  consider(n, [&](std::size_t k) { return (col[2][k] - dx) / 2; });
  consider(n, [&](std::size_t k) { return (dy - col[3][n - 1 - k]) / 2; });
  consider(n, [&](std::size_t k) { return (col[4][k] - dy) / 2; });
  const auto winner = decide(s, best);
  if (!winner) throw std::logic_error("nearest: candidate search lost its witness");
  return {*winner, curves_[*winner].id, translation_distance(s, curves_[*winner])};
}

SegmentTranslationTree::SegmentTranslationTree(std::vector<Segment> segments,
                                               MultiLevelTree::Options options)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw BuildError("segment index needs at least one segment");
  rank_ = id_ranks(segments_);
  by_rank_.resize(segments_.size());
  std::vector<double> points;
  std::array<std::vector<double>, 4> wedge_keys;
  std::vector<Ranked> by_id;
  std::array<std::vector<Ranked>, 4> wedge_scores;
  for (std::uint32_t k = 0; k < segments_.size(); ++k) {
    validate(segments_[k]);
    by_rank_[rank_[k]] = k;
    const Point c = segments_[k].b - segments_[k].a;
    diffs_.push_back(c);
    points.insert(points.end(), {c.x, c.y});
    by_id.push_back(Ranked{0.0, rank_[k]});
    const double along[4] = {c.x, c.x, c.y, c.y};
    const double score[4] = {c.x, -c.x, c.y, -c.y};
    for (std::size_t e = 0; e < 4; ++e) {
      wedge_keys[e].insert(wedge_keys[e].end(), {c.x - c.y, c.x + c.y, along[e]});
      wedge_scores[e].push_back(Ranked{score[e], rank_[k]});
    }
  }
  range_ = MultiLevelTree(2, std::move(points), std::move(by_id), options);
  for (std::size_t e = 0; e < 4; ++e) {
    edges_[e] = MultiLevelTree(3, std::move(wedge_keys[e]), std::move(wedge_scores[e]), options);
  }
}

std::optional<std::size_t> SegmentTranslationTree::first_in(const Box& rect) const {
  const std::array<Bound, 2> bounds{Bound{rect.min_x, rect.max_x}, Bound{rect.min_y, rect.max_y}};
  const auto hit = range_.query_min(bounds);
  if (!hit) return std::nullopt;
  return by_rank_[hit->best.id];
}

std::optional<std::pair<std::size_t, double>> SegmentTranslationTree::first_beyond(
    const Box& rect, Edge edge) const {
  const double x0 = rect.min_x, x1 = rect.max_x, y0 = rect.min_y, y1 = rect.max_y;
  std::array<Bound, 3> bounds;
  switch (edge) {
    case Edge::kRight:
      bounds = {Bound::at_least(x1 - y1), Bound::at_least(x1 + y0), Bound::at_least(x1)};
      break;
    case Edge::kLeft:
      bounds = {Bound::at_most(x0 - y0), Bound::at_most(x0 + y1), Bound::at_most(x0)};
      break;
    case Edge::kTop:
      bounds = {Bound::at_most(x1 - y1), Bound::at_least(x0 + y1), Bound::at_least(y1)};
      break;
    case Edge::kBottom:
      bounds = {Bound::at_least(x0 - y0), Bound::at_most(x1 + y0), Bound::at_most(y0)};
      break;
  }
  const auto hit = edges_[static_cast<std::size_t>(edge)].query_min(bounds);
  if (!hit) return std::nullopt;
  double gap = 0.0;
  switch (edge) {
    case Edge::kRight: gap = hit->best.key - x1; break;
    case Edge::kLeft: gap = x0 + hit->best.key; break;
    case Edge::kTop: gap = hit->best.key - y1; break;
    case Edge::kBottom: gap = y0 + hit->best.key; break;
  }
  return std::make_pair(static_cast<std::size_t>(by_rank_[hit->best.id]), gap);
}

std::optional<std::size_t> SegmentTranslationTree::decide(const Curve& q, double d) const {
  if (!(d >= 0.0)) throw InvalidInput("query distance must be non-negative");
  require_query_curve(q);
  const PartitionProfile profile(q.vertices);
  std::optional<std::size_t> best;
  for (std::size_t i = 1; i <= profile.split_count(); ++i) {
    const TranslationKey key = translation_key(profile, i);
    if (key.r > d) continue;
    const Box rect{key.u2 - 2 * d, key.u1 + 2 * d, key.u4 - 2 * d, key.u3 + 2 * d};
    if (auto hit = first_in(rect); hit && (!best || rank_[*hit] < rank_[*best])) best = hit;
  }
  return best;
}

Neighbor SegmentTranslationTree::nearest(const Curve& q) const {
  require_query_curve(q);
  const PartitionProfile profile(q.vertices);
  double best = kInf;
  std::uint32_t best_rank = 0;
  auto offer = [&](double d, std::size_t index) {
    if (d < best || (d == best && rank_[index] < best_rank)) {
      best = d;
      best_rank = rank_[index];
    }
  };
  for (std::size_t i = 1; i <= profile.split_count(); ++i) {
    const TranslationKey key = translation_key(profile, i);
    const double d0 = key.r;
    if (d0 > best) continue;
    const Box rect{key.u2 - 2 * d0, key.u1 + 2 * d0, key.u4 - 2 * d0, key.u3 + 2 * d0};
    if (auto inside = first_in(rect)) {
      offer(d0, *inside);
      continue;
    }
    for (Edge edge : {Edge::kRight, Edge::kLeft, Edge::kTop, Edge::kBottom}) {
      if (auto hit = first_beyond(rect, edge)) offer(d0 + hit->second / 2, hit->first);
    }
  }
  const std::size_t index = by_rank_[best_rank];
  return {index, segments_[index].id, translation_distance(segments_[index], q)};
}

}  // namespace curveprox
