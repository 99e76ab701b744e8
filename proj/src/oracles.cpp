#include "curveprox/oracles.hpp"

#include <algorithm>
#include <limits>

namespace curveprox::oracles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Extent {
  double lo = kInf;
  double hi = -kInf;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

// Translation distance along one axis for prefix/suffix coordinates and segment ends.
double axis_translation(const std::vector<double>& pre, const std::vector<double>& suf,
                        double a, double b) {
  Extent p;
  Extent s;
  for (double v : pre) p.add(v);
  for (double v : suf) s.add(v);
  // t must put a + t within d of every prefix value and b + t within d of every suffix value
  double d = std::max((p.hi - p.lo) / 2, (s.hi - s.lo) / 2);
  d = std::max(d, ((p.hi - a) - (s.lo - b)) / 2);
  d = std::max(d, ((s.hi - b) - (p.lo - a)) / 2);
  return d;
}

void check_nonempty(bool empty) {
  if (empty) throw InvalidInput("oracle: empty dataset");
}

}  // namespace

double frechet_table(std::span<const Point> p, std::span<const Point> q, Metric metric) {
  if (p.empty() || q.empty()) throw InvalidInput("oracle: empty curve");
  std::vector<std::vector<double>> table(p.size(), std::vector<double>(q.size(), kInf));
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      double reach = (i == 0 && j == 0) ? 0.0 : kInf;
      if (i > 0) reach = std::min(reach, table[i - 1][j]);
      if (j > 0) reach = std::min(reach, table[i][j - 1]);
      if (i > 0 && j > 0) reach = std::min(reach, table[i - 1][j - 1]);
      table[i][j] = std::max(reach, distance(p[i], q[j], metric));
    }
  }
  return table.back().back();
}

double translation_distance_brute(const Segment& s, const Curve& c) {
  if (c.vertices.empty()) throw InvalidInput("oracle: empty curve");
  if (c.size() < 2) return std::max(std::abs(s.b.x - s.a.x), std::abs(s.b.y - s.a.y)) / 2;
  double best = kInf;
  for (std::size_t i = 1; i < c.size(); ++i) {
    std::vector<double> px, py, sx, sy;
    for (std::size_t k = 0; k < c.size(); ++k) {
      (k < i ? px : sx).push_back(c[k].x);
      (k < i ? py : sy).push_back(c[k].y);
    }
    best = std::min(best, std::max(axis_translation(px, sx, s.a.x, s.b.x),
                                   axis_translation(py, sy, s.a.y, s.b.y)));
  }
  return best;
}

Neighbor nn_brute(const std::vector<Curve>& curves, const Segment& s, Metric metric,
                  bool translation) {
  check_nonempty(curves.empty());
  Neighbor best{0, "", kInf};
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const Point ends[2] = {s.a, s.b};
    const double d = translation ? translation_distance_brute(s, curves[k])
                                 : frechet_table(ends, curves[k].vertices, metric);
    if (d < best.distance || (d == best.distance && curves[k].id < best.id)) {
      best = {k, curves[k].id, d};
    }
  }
  return best;
}

Neighbor nn_brute(const std::vector<Segment>& segments, const Curve& q, Metric metric,
                  bool translation) {
  check_nonempty(segments.empty());
  Neighbor best{0, "", kInf};
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const Segment& s = segments[k];
    const Point ends[2] = {s.a, s.b};
    const double d = translation ? translation_distance_brute(s, q)
                                 : frechet_table(ends, q.vertices, metric);
    if (d < best.distance || (d == best.distance && s.id < best.id)) best = {k, s.id, d};
  }
  return best;
}

double enclosing_radius_brute(const std::vector<Point>& points) {
  if (points.empty()) throw InvalidInput("oracle: empty point set");
  auto covers = [&](Point c, double r) {
    const double slack = 1e-9 * std::max(1.0, r);
    for (const Point& p : points) {
      if (l2_distance(p, c) > r + slack) return false;
    }
    return true;
  };
  double best = points.size() == 1 ? 0.0 : kInf;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const Point u = points[i];
      const Point v = points[j];
      const double r = l2_distance(u, v) / 2;
      if (r < best && covers(Point{(u.x + v.x) / 2, (u.y + v.y) / 2}, r)) best = r;
      for (std::size_t k = j + 1; k < points.size(); ++k) {
        const Point w = points[k];
        const double bx = v.x - u.x, by = v.y - u.y, cx = w.x - u.x, cy = w.y - u.y;
        const double det = 2 * (bx * cy - by * cx);
        if (det == 0.0) continue;
        const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
        const Point center{u.x + (cy * b2 - by * c2) / det, u.y + (bx * c2 - cx * b2) / det};
        const double rc = std::max({l2_distance(center, u), l2_distance(center, v),
                                    l2_distance(center, w)});
        if (rc < best && covers(center, rc)) best = rc;
      }
    }
  }
  return best;
}

BruteCenter center_brute(const std::vector<Curve>& curves, Metric metric, bool translation) {
  check_nonempty(curves.empty());
  if (translation && metric != Metric::kLinf) {
    throw InvalidInput("oracle: translation center is defined for L∞ only");
  }
  std::size_t total = 1;
  for (const Curve& c : curves) {
    if (c.size() < 2) throw InvalidInput("oracle: curve '" + c.id + "' has fewer than 2 vertices");
    total *= c.size() - 1;
    if (total > kCenterBruteLimit) {
      throw InvalidInput("oracle: more than " + std::to_string(kCenterBruteLimit) +
                         " split assignments; refusing to enumerate");
    }
  }

  BruteCenter best{kInf, {}};
  std::vector<std::size_t> split(curves.size(), 1);
  for (std::size_t step = 0; step < total; ++step) {
    double cost = 0.0;
    if (translation) {
      for (int axis = 0; axis < 2; ++axis) {
        double half = 0.0, max_span = -kInf, min_gap = kInf;
        for (std::size_t j = 0; j < curves.size(); ++j) {
          Extent p, s;
          for (std::size_t k = 0; k < curves[j].size(); ++k) {
            const double v = axis == 0 ? curves[j][k].x : curves[j][k].y;
            (k < split[j] ? p : s).add(v);
          }
          half = std::max({half, (p.hi - p.lo) / 2, (s.hi - s.lo) / 2});
          max_span = std::max(max_span, s.hi - p.lo);
          min_gap = std::min(min_gap, s.lo - p.hi);
        }
        cost = std::max({cost, half, (max_span - min_gap) / 4});
      }
    } else {
      std::vector<Point> pre, suf;
      for (std::size_t j = 0; j < curves.size(); ++j) {
        for (std::size_t k = 0; k < curves[j].size(); ++k) {
          (k < split[j] ? pre : suf).push_back(curves[j][k]);
        }
      }
      if (metric == Metric::kLinf) {
        for (const auto* set : {&pre, &suf}) {
          Extent x, y;
          for (const Point& p : *set) {
            x.add(p.x);
            y.add(p.y);
          }
          cost = std::max({cost, (x.hi - x.lo) / 2, (y.hi - y.lo) / 2});
        }
      } else {
        cost = std::max(enclosing_radius_brute(pre), enclosing_radius_brute(suf));
      }
    }
    if (cost < best.radius) best = {cost, split};

    for (std::size_t j = 0; j < curves.size(); ++j) {
      if (++split[j] < curves[j].size()) break;
      split[j] = 1;
    }
  }
  return best;
}

OracleReport compare(std::string query, double oracle, double structure, double tolerance) {
  OracleReport report{std::move(query), oracle, structure, std::abs(oracle - structure), false};
  report.match = report.discrepancy <= tolerance;
  return report;
}

}  // namespace curveprox::oracles
