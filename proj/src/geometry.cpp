#include "curveprox/geometry.hpp"

#include <random>

namespace curveprox {

std::string_view to_string(Metric metric) { return metric == Metric::kLinf ? "linf" : "l2"; }

Metric parse_metric(std::string_view name) {
  if (name == "linf") return Metric::kLinf;
  if (name == "l2") return Metric::kL2;
  throw InvalidInput("unknown metric '" + std::string(name) + "' (expected linf or l2)");
}

Box bounding_box(std::span<const Point> points) {
  Box box;
  for (const Point& p : points) box.extend(p);
  return box;
}

void validate(const Curve& curve) {
  if (curve.vertices.empty()) throw InvalidInput("curve '" + curve.id + "' has no vertices");
  for (const Point& p : curve.vertices) {
    if (!is_finite(p)) throw InvalidInput("curve '" + curve.id + "' has a non-finite coordinate");
  }
}

void validate(const Segment& segment) {
  if (!is_finite(segment.a) || !is_finite(segment.b)) {
    throw InvalidInput("segment '" + segment.id + "' has a non-finite coordinate");
  }
}

Curve as_curve(const Segment& segment) { return Curve{segment.id, {segment.a, segment.b}}; }

Curve translated(const Curve& curve, Point offset) {
  Curve out{curve.id, {}};
  out.vertices.reserve(curve.size());
  for (const Point& p : curve.vertices) out.vertices.push_back(p + offset);
  return out;
}

double min_enclosing_square_radius(std::span<const Point> points) {
  if (points.empty()) throw InvalidInput("min_enclosing_square_radius: empty point set");
  return bounding_box(points).square_radius();
}

namespace {

bool inside(Point p, const Ball& ball) {
  // relative slack on the boundary
  const double slack = 1e-12 * (1.0 + ball.radius + std::abs(ball.center.x) + std::abs(ball.center.y));
  return l2_distance(p, ball.center) <= ball.radius + slack;
}

Ball ball_from(Point p, Point q) {
  return {0.5 * (p + q), l2_distance(p, q) / 2};
}

Ball ball_from(Point p, Point q, Point r) {
  const Point b = q - p;
  const Point c = r - p;
  const double d = 2.0 * (b.x * c.y - b.y * c.x);
  if (d == 0.0) {
    // Collinear: the diameter is the farthest pair.
    Ball best = ball_from(p, q);
    for (const Ball& cand : {ball_from(p, r), ball_from(q, r)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const double bb = dot(b, b);
  const double cc = dot(c, c);
  const Point offset{(c.y * bb - b.y * cc) / d, (b.x * cc - c.x * bb) / d};
  const Point center = p + offset;
  const double radius =
      std::max({l2_distance(center, p), l2_distance(center, q), l2_distance(center, r)});
  return {center, radius};
}

}  // namespace

Ball min_enclosing_ball(std::span<const Point> points) {
  if (points.empty()) throw InvalidInput("min_enclosing_ball: empty point set");
  std::vector<Point> pts(points.begin(), points.end());
  std::mt19937 rng(0x5eedu);
  std::shuffle(pts.begin(), pts.end(), rng);

  Ball ball{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (inside(pts[i], ball)) continue;
    ball = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (inside(pts[j], ball)) continue;
      ball = ball_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!inside(pts[k], ball)) ball = ball_from(pts[i], pts[j], pts[k]);
      }
    }
  }
  return ball;
}

std::vector<Point> circle_intersections(Point c1, Point c2, double r) {
  const double d = l2_distance(c1, c2);
  if (d == 0.0 || d > 2 * r) return {};
  const Point mid = 0.5 * (c1 + c2);
  const double h2 = r * r - (d / 2) * (d / 2);
  if (h2 <= 0.0) return {mid};
  const double h = std::sqrt(h2);
  const Point normal{-(c2.y - c1.y) / d, (c2.x - c1.x) / d};
  return {mid + h * normal, mid - h * normal};
}

double circumradius(Point a, Point b, Point c) {
  const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (cross == 0.0) return INFINITY;
  return l2_distance(a, b) * l2_distance(b, c) * l2_distance(c, a) / (2.0 * std::abs(cross));
}

}  // namespace curveprox
