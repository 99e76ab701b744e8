#include "curveprox/frechet.hpp"

#include <algorithm>
#include <limits>

namespace curveprox {

double dfd_dp(std::span<const Point> p, std::span<const Point> q, Metric metric) {
  if (p.empty() || q.empty()) throw InvalidInput("dfd_dp: empty curve");
  // row[j] = distance for prefixes p[0..i], q[0..j]
  std::vector<double> row(q.size());
  row[0] = distance(p[0], q[0], metric);
  for (std::size_t j = 1; j < q.size(); ++j) {
    row[j] = std::max(row[j - 1], distance(p[0], q[j], metric));
  }
  for (std::size_t i = 1; i < p.size(); ++i) {
    double diag = row[0];
    row[0] = std::max(row[0], distance(p[i], q[0], metric));
    for (std::size_t j = 1; j < q.size(); ++j) {
      const double best = std::min({diag, row[j], row[j - 1]});
      diag = row[j];
      row[j] = std::max(best, distance(p[i], q[j], metric));
    }
  }
  return row.back();
}

double dfd_dp(const Curve& c1, const Curve& c2, Metric metric) {
  return dfd_dp(std::span<const Point>(c1.vertices), std::span<const Point>(c2.vertices), metric);
}

SegmentMatch dfd_segment_curve(Point a, Point b, std::span<const Point> curve, Metric metric) {
  const std::size_t m = curve.size();
  if (m == 0) throw InvalidInput("dfd_segment_curve: empty curve");
  if (m == 1) {
    const Point ends[2] = {a, b};
    return {dfd_dp(ends, curve, metric), 0};
  }
  // suffix_max[k] = max_{j >= k} d(b, p_j)
  std::vector<double> suffix_max(m + 1, 0.0);
  for (std::size_t k = m; k-- > 0;) {
    suffix_max[k] = std::max(suffix_max[k + 1], distance(b, curve[k], metric));
  }
  SegmentMatch best{std::numeric_limits<double>::infinity(), 1};
  double prefix_max = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    prefix_max = std::max(prefix_max, distance(a, curve[i - 1], metric));
    const double d = std::max(prefix_max, suffix_max[i]);
    if (d < best.distance) best = {d, i};
  }
  return best;
}

SegmentMatch dfd_segment_curve(const Segment& s, const Curve& curve, Metric metric) {
  return dfd_segment_curve(s.a, s.b, curve.vertices, metric);
}

PartitionProfile::PartitionProfile(std::span<const Point> vertices) {
  const std::size_t m = vertices.size();
  if (m < 2) throw InvalidInput("partition profile needs at least 2 vertices");
  prefix_.resize(m - 1);
  suffix_.resize(m - 1);
  Box running;
  for (std::size_t i = 1; i < m; ++i) {
    running.extend(vertices[i - 1]);
    prefix_[i - 1] = running;
  }
  running = Box{};
  for (std::size_t i = m - 1; i >= 1; --i) {
    running.extend(vertices[i]);
    suffix_[i - 1] = running;
  }
}

PartitionProfile partition_profile(const Curve& curve) {
  if (curve.size() < 2) {
    throw InvalidInput("partition profile of curve '" + curve.id + "' needs at least 2 vertices");
  }
  return PartitionProfile(curve.vertices);
}

}  // namespace curveprox
