#include "curveprox/center.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <set>
#include <tuple>

namespace curveprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTolerance = 1e-9;

void require_center_input(const std::vector<Curve>& curves) {
  if (curves.empty()) throw InvalidInput("center needs at least one curve");
  for (const Curve& c : curves) {
    validate(c);
    if (c.size() < 2) throw InvalidInput("curve '" + c.id + "' needs at least 2 vertices");
  }
}

Box union_box(const std::vector<Curve>& curves, const std::vector<std::size_t>& splits,
              bool prefix) {
  Box box;
  for (std::size_t j = 0; j < curves.size(); ++j) {
    const std::size_t from = prefix ? 0 : splits[j];
    const std::size_t to = prefix ? splits[j] : curves[j].size();
    for (std::size_t k = from; k < to; ++k) box.extend(curves[j][k]);
  }
  return box;
}

}  // namespace

double solution_cost(const CenterSolution& solution, const std::vector<Curve>& curves) {
  double cost = 0.0;
  for (std::size_t j = 0; j < curves.size(); ++j) {
    const Point t = solution.translations.empty() ? Point{} : solution.translations[j];
    const Curve moved = translated(curves[j], t);
    cost = std::max(cost, dfd_segment_curve(solution.a, solution.b, moved.vertices, solution.metric)
                              .distance);
  }
  return cost;
}

PrefixBitTree::PrefixBitTree(std::size_t size) : size_(size), leaves_(1) {
  while (leaves_ < size_) leaves_ *= 2;
  bits_.assign(2 * leaves_, 0);
  // padding leaves count as unset so the prefix never runs past size_
}

void PrefixBitTree::set(std::size_t position) {
  std::size_t node = leaves_ + position;
  bits_[node] = 1;
  for (node /= 2; node >= 1; node /= 2) {
    const char both = bits_[2 * node] && bits_[2 * node + 1];
    if (bits_[node] == both) break;
    bits_[node] = both;
  }
}

std::size_t PrefixBitTree::covered_prefix() const {
  if (bits_[1]) return size_;
  std::size_t node = 1;
  std::size_t covered = 0;
  std::size_t width = leaves_;
  while (node < leaves_) {
    width /= 2;
    if (bits_[2 * node]) {
      covered += width;
      node = 2 * node + 1;
    } else {
      node = 2 * node;
    }
  }
  return std::min(covered + (bits_[node] ? 1 : 0), size_);
}

namespace {

struct SweepResult {
  double cost = kInf;
  std::vector<std::size_t> prefix;  // in the sweep's curve orientation
};

// Sweep vertices outward from corner v; prefixes grow while their vertices fit the
// square of side D anchored at v.
SweepResult corner_sweep(const std::vector<std::vector<Point>>& curves, Point v) {
  struct Event {
    double dist;
    std::uint32_t curve;
    std::uint32_t vertex;
  };
  std::vector<Event> events;
  std::multiset<double> xs;
  std::multiset<double> ys;
  std::vector<PrefixBitTree> bits;
  std::vector<std::size_t> prefix(curves.size(), 0);
  for (std::uint32_t j = 0; j < curves.size(); ++j) {
    const auto& c = curves[j];
    bits.emplace_back(c.size() - 1);
    for (std::uint32_t k = 0; k < c.size(); ++k) {
      xs.insert(c[k].x);
      ys.insert(c[k].y);
      if (k + 1 < c.size()) events.push_back({linf_distance(v, c[k]), j, k});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& l, const Event& r) {
    return std::tie(l.dist, l.curve, l.vertex) < std::tie(r.dist, r.curve, r.vertex);
  });

  SweepResult best;
  std::size_t started = 0;  // curves whose first vertex is inside
  std::vector<std::uint32_t> touched;
  for (std::size_t e = 0; e < events.size();) {
    const double dist = events[e].dist;
    touched.clear();
    for (; e < events.size() && events[e].dist == dist; ++e) {
      bits[events[e].curve].set(events[e].vertex);
      touched.push_back(events[e].curve);
    }
    for (std::uint32_t j : touched) {
      const std::size_t grown = bits[j].covered_prefix();
      if (grown > 0 && prefix[j] == 0) ++started;
      for (std::size_t k = prefix[j]; k < grown; ++k) {
        xs.erase(xs.find(curves[j][k].x));
        ys.erase(ys.find(curves[j][k].y));
      }
      prefix[j] = std::max(prefix[j], grown);
    }
    if (started < curves.size()) continue;
    const double suffix = std::max(*xs.rbegin() - *xs.begin(), *ys.rbegin() - *ys.begin()) / 2;
    const double cost = std::max(dist / 2, suffix);
    if (cost < best.cost) best = {cost, prefix};
  }
  return best;
}

}  // namespace

CenterSolution center_linf(const std::vector<Curve>& curves) {
  require_center_input(curves);
  std::vector<std::vector<Point>> forward;
  std::vector<std::vector<Point>> backward;
  Box bounds;
  for (const Curve& c : curves) {
    forward.push_back(c.vertices);
    backward.emplace_back(c.vertices.rbegin(), c.vertices.rend());
    bounds.extend(bounding_box(c.vertices));
  }
  const std::array<Point, 4> corners{Point{bounds.min_x, bounds.min_y}, Point{bounds.max_x, bounds.min_y},
                                     Point{bounds.max_x, bounds.max_y}, Point{bounds.min_x, bounds.max_y}};
  double best = kInf;
  std::vector<std::size_t> splits;
  for (const Point& v : corners) {
    for (int reversed = 0; reversed < 2; ++reversed) {
      SweepResult sweep = corner_sweep(reversed ? backward : forward, v);
      if (!(sweep.cost < best)) continue;
      best = sweep.cost;
      splits = sweep.prefix;
      if (reversed) {
        for (std::size_t j = 0; j < curves.size(); ++j) splits[j] = curves[j].size() - splits[j];
      }
    }
  }
  CenterSolution solution;
  solution.metric = Metric::kLinf;
  solution.splits = splits;
  const Box pre = union_box(curves, splits, true);
  const Box suf = union_box(curves, splits, false);
  solution.a = pre.center();
  solution.b = suf.center();
  solution.radius = std::max(pre.square_radius(), suf.square_radius());
  return solution;
}

double r_lower_bound(const PartitionProfile& profile, std::size_t i, int sx, int sy, double dx,
                     double dy) {
  const Box& pre = profile.prefix(i);
  const Box& suf = profile.suffix(i);
  const double gap_x = sx > 0 ? suf.min_x - pre.max_x : pre.min_x - suf.max_x;
  const double gap_y = sy > 0 ? suf.min_y - pre.max_y : pre.min_y - suf.max_y;
  return std::max({pre.width() / 2, suf.width() / 2, pre.height() / 2, suf.height() / 2,
                   (dx - gap_x) / 4, (dy - gap_y) / 4});
}

CenterSolution center_linf_translation(const std::vector<Curve>& curves) {
  require_center_input(curves);
  double dx = 0.0;
  double dy = 0.0;
  std::vector<PartitionProfile> profiles;
  for (const Curve& c : curves) {
    const Box box = bounding_box(c.vertices);
    dx = std::max(dx, box.width());
    dy = std::max(dy, box.height());
    profiles.emplace_back(c.vertices);
  }
  double best = kInf;
  int best_sx = 1;
  int best_sy = 1;
  std::vector<std::size_t> best_splits;
  for (int sx : {1, -1}) {
    for (int sy : {1, -1}) {
      double worst = 0.0;
      std::vector<std::size_t> splits;
      for (const PartitionProfile& profile : profiles) {
        double lowest = kInf;
        std::size_t arg = 1;
        for (std::size_t i = 1; i <= profile.split_count(); ++i) {
          const double r = r_lower_bound(profile, i, sx, sy, dx, dy);
          if (r < lowest) {
            lowest = r;
            arg = i;
          }
        }
        worst = std::max(worst, lowest);
        splits.push_back(arg);
      }
      if (worst < best) {
        best = worst;
        best_sx = sx;
        best_sy = sy;
        best_splits = std::move(splits);
      }
    }
  }

  CenterSolution solution;
  solution.metric = Metric::kLinf;
  solution.translation = true;
  solution.radius = best;
  solution.splits = best_splits;
  // prefix and suffix squares sit in opposite corners of [0, dx] x [0, dy]
  const double r = best;
  auto ranges = [&](int sign, double extent) {
    const std::pair<double, double> low{0.0, 2 * r};
    const std::pair<double, double> high{extent - 2 * r, extent};
    return sign > 0 ? std::make_pair(low, high) : std::make_pair(high, low);
  };
  const auto [sqx, barx] = ranges(best_sx, dx);
  const auto [sqy, bary] = ranges(best_sy, dy);
  solution.a = {(sqx.first + sqx.second) / 2, (sqy.first + sqy.second) / 2};
  solution.b = {(barx.first + barx.second) / 2, (bary.first + bary.second) / 2};
  for (std::size_t j = 0; j < curves.size(); ++j) {
    const Box& pre = profiles[j].prefix(best_splits[j]);
    const Box& suf = profiles[j].suffix(best_splits[j]);
    auto shift = [](std::pair<double, double> sq, std::pair<double, double> bar, double pre_lo,
                    double pre_hi, double suf_lo, double suf_hi) {
      const double lo = std::max(sq.first - pre_lo, bar.first - suf_lo);
      const double hi = std::min(sq.second - pre_hi, bar.second - suf_hi);
      return (lo + hi) / 2;
    };
    solution.translations.push_back(
        {shift(sqx, barx, pre.min_x, pre.max_x, suf.min_x, suf.max_x),
         shift(sqy, bary, pre.min_y, pre.max_y, suf.min_y, suf.max_y)});
  }
  return solution;
}

std::vector<double> candidate_radii(const std::vector<Curve>& curves) {
  std::vector<Point> pts;
  for (const Curve& c : curves) pts.insert(pts.end(), c.vertices.begin(), c.vertices.end());
  if (pts.empty()) throw InvalidInput("candidate_radii needs at least one vertex");
  std::vector<double> radii{0.0};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      radii.push_back(l2_distance(pts[i], pts[j]) / 2);
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const Point u = pts[i], v = pts[j], w = pts[k];
        const bool acute = dot(v - u, w - u) > 0 && dot(u - v, w - v) > 0 && dot(u - w, v - w) > 0;
        if (acute) radii.push_back(circumradius(u, v, w));
      }
    }
  }
  std::sort(radii.begin(), radii.end());
  std::vector<double> unique;
  for (double r : radii) {
    if (unique.empty() || r - unique.back() > 1e-12 * std::max(1.0, r)) unique.push_back(r);
  }
  return unique;
}

std::optional<L2Decision> center_l2_decision(const std::vector<Curve>& curves, double r) {
  if (!(r >= 0.0)) throw InvalidInput("radius must be non-negative");
  require_center_input(curves);
  std::vector<Point> pts;
  for (const Curve& c : curves) pts.insert(pts.end(), c.vertices.begin(), c.vertices.end());
  std::vector<Point> candidates = pts;
  const double reach = 2 * r * (1 + 1e-12) + kTolerance;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = l2_distance(pts[i], pts[j]);
      if (d == 0.0 || d > reach) continue;
      if (d >= 2 * r) {
        candidates.push_back(0.5 * (pts[i] + pts[j]));
      } else {
        for (const Point& p : circle_intersections(pts[i], pts[j], r)) candidates.push_back(p);
      }
    }
  }
  const double limit = r + kTolerance;
  std::vector<std::size_t> splits(curves.size());
  std::vector<Point> suffix;
  for (const Point& a : candidates) {
    bool ok = true;
    suffix.clear();
    for (std::size_t j = 0; j < curves.size() && ok; ++j) {
      const Curve& c = curves[j];
      std::size_t i = 0;
      while (i + 1 < c.size() && l2_distance(a, c[i]) <= limit) ++i;
      if (i == 0) ok = false;
      splits[j] = i;
      suffix.insert(suffix.end(), c.vertices.begin() + static_cast<long>(i), c.vertices.end());
    }
    if (!ok) continue;
    const Ball ball = min_enclosing_ball(suffix);
    if (ball.radius <= limit) return L2Decision{a, ball.center, splits};
  }
  return std::nullopt;
}

CenterSolution center_l2(const std::vector<Curve>& curves) {
  require_center_input(curves);
  const std::vector<double> radii = candidate_radii(curves);
  std::size_t lo = 0;
  std::size_t hi = radii.size() - 1;
  std::optional<L2Decision> found = center_l2_decision(curves, radii[hi]);
  if (!found) throw std::logic_error("center_l2: largest candidate radius is infeasible");
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (auto decision = center_l2_decision(curves, radii[mid])) {
      hi = mid;
      found = std::move(decision);
    } else {
      lo = mid + 1;
    }
  }
  if (lo != hi || !found) throw std::logic_error("center_l2: binary search failed");
  CenterSolution solution;
  solution.metric = Metric::kL2;
  solution.radius = radii[lo];
  solution.a = found->a;
  solution.b = found->b;
  solution.splits = found->splits;
  return solution;
}

}  // namespace curveprox
