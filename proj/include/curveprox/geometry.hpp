#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace curveprox {

/// Raised for precondition violations on user-supplied data or parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an index cannot be built from the supplied items.
class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point p, Point q) { return {p.x + q.x, p.y + q.y}; }
  friend Point operator-(Point p, Point q) { return {p.x - q.x, p.y - q.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point p, Point q) = default;
};

inline double dot(Point p, Point q) { return p.x * q.x + p.y * q.y; }

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

enum class Metric { kLinf, kL2 };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view name);

inline double linf_distance(Point p, Point q) {
  return std::max(std::abs(p.x - q.x), std::abs(p.y - q.y));
}

inline double l2_distance(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

inline double distance(Point p, Point q, Metric metric) {
  return metric == Metric::kLinf ? linf_distance(p, q) : l2_distance(p, q);
}

/// Closed axis-aligned bounding box. Default-constructed boxes are empty.
struct Box {
  double min_x = INFINITY;
  double max_x = -INFINITY;
  double min_y = INFINITY;
  double max_y = -INFINITY;

  void extend(Point p) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  void extend(const Box& other) {
    min_x = std::min(min_x, other.min_x);
    max_x = std::max(max_x, other.max_x);
    min_y = std::min(min_y, other.min_y);
    max_y = std::max(max_y, other.max_y);
  }
  bool empty() const { return min_x > max_x; }
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(Point p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  Point center() const { return {0.5 * (min_x + max_x), 0.5 * (min_y + max_y)}; }
  /// Radius of the smallest axis-parallel square containing the box.
  double square_radius() const { return std::max(width(), height()) / 2; }
};

Box bounding_box(std::span<const Point> points);

struct Segment {
  std::string id;
  Point a;
  Point b;
};

struct Curve {
  std::string id;
  std::vector<Point> vertices;

  std::size_t size() const { return vertices.size(); }
  const Point& operator[](std::size_t i) const { return vertices[i]; }
};

/// Throws InvalidInput if the curve is empty or has a non-finite vertex.
void validate(const Curve& curve);
void validate(const Segment& segment);

Curve as_curve(const Segment& segment);
Curve translated(const Curve& curve, Point offset);

/// max(x-extent, y-extent) / 2.
double min_enclosing_square_radius(std::span<const Point> points);

struct Ball {
  Point center;
  double radius = 0.0;
};

/// Smallest enclosing disk (L2), move-to-front incremental construction.
Ball min_enclosing_ball(std::span<const Point> points);

/// Intersection points of the two radius-r circles around c1 and c2.
/// Coincident centers yield no points; exact tangency yields one.
std::vector<Point> circle_intersections(Point c1, Point c2, double r);

/// Circumradius of a triangle, or +inf for collinear input.
double circumradius(Point a, Point b, Point c);

}  // namespace curveprox
