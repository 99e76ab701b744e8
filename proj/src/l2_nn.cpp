#include "curveprox/l2_nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "curveprox/candidate_search.hpp"
#include "curveprox/frechet.hpp"

namespace curveprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidInput("epsilon must lie in (0, 1]");
}

void require_splittable(const Curve& c) {
  validate(c);
  if (c.size() < 2) throw BuildError("curve '" + c.id + "' has a single vertex and cannot be split");
}

}  // namespace

ExponentialGrid::ExponentialGrid(Point center, double eps, double alpha, double beta)
    : center_(center), alpha_(alpha), beta_(beta) {
  require_eps(eps);
  if (!is_finite(center)) throw InvalidInput("grid center must be finite");
  if (!(alpha > 0.0 && alpha <= beta && std::isfinite(beta))) {
    throw InvalidInput("grid range needs 0 < alpha <= beta");
  }
  while (half_side(levels_) < beta_) ++levels_;
  per_side_ = 4 * static_cast<std::size_t>(std::ceil(std::numbers::sqrt2 / eps));
  const std::size_t c = per_side_;
  ring_rank_.assign(c * c, -1);
  for (std::size_t row = 0; row < c; ++row) {
    for (std::size_t col = 0; col < c; ++col) {
      const bool inner = row >= c / 4 && row < 3 * c / 4 && col >= c / 4 && col < 3 * c / 4;
      if (inner) continue;
      ring_rank_[row * c + col] = static_cast<std::int32_t>(ring_cell_.size());
      ring_cell_.push_back(static_cast<std::uint32_t>(row * c + col));
    }
  }
  ring_ = ring_cell_.size();
}

double ExponentialGrid::half_side(std::size_t level) const {
  return std::ldexp(alpha_, static_cast<int>(level));
}

Box ExponentialGrid::extent() const {
  const double h = half_side(levels_);
  return {center_.x - h, center_.x + h, center_.y - h, center_.y + h};
}

GridCell ExponentialGrid::cell(std::size_t index) const {
  if (index == 0) {
    return {Box{center_.x - alpha_, center_.x + alpha_, center_.y - alpha_, center_.y + alpha_},
            center_};
  }
  const std::size_t level = 1 + (index - 1) / ring_;
  const std::uint32_t rc = ring_cell_[(index - 1) % ring_];
  const double h = half_side(level);
  const double side = 2 * h / static_cast<double>(per_side_);
  const double x0 = center_.x - h + side * static_cast<double>(rc % per_side_);
  const double y0 = center_.y - h + side * static_cast<double>(rc / per_side_);
  const Box rect{x0, x0 + side, y0, y0 + side};
  return {rect, rect.center()};
}

std::optional<std::size_t> ExponentialGrid::locate(Point q) const {
  const double t = linf_distance(q, center_);
  if (t <= alpha_) return 0;
  std::size_t level = 1;
  while (level <= levels_ && t > half_side(level)) ++level;
  if (level > levels_) return std::nullopt;
  const auto c = static_cast<long>(per_side_);
  for (; level > 0; --level) {
    const double h = half_side(level);
    const double side = 2 * h / static_cast<double>(per_side_);
    const long col = std::clamp(static_cast<long>(std::floor((q.x - center_.x + h) / side)), 0L, c - 1);
    const long row = std::clamp(static_cast<long>(std::floor((q.y - center_.y + h) / side)), 0L, c - 1);
    const std::int32_t rank = ring_rank_[static_cast<std::size_t>(row * c + col)];
    if (rank >= 0) return 1 + (level - 1) * ring_ + static_cast<std::size_t>(rank);
    // rounding put q on the inner boundary; it belongs to the next level inwards
  }
  return 0;
}

AnnIndex::AnnIndex(std::vector<Curve> curves, double eps, double r)
    : AnnIndex(std::move(curves), eps, r, Options{}) {}

AnnIndex::AnnIndex(std::vector<Curve> curves, double eps, double r, Options options)
    : curves_(std::move(curves)), eps_(eps), r_(r) {
  require_eps(eps);
  if (!(r > 0.0 && std::isfinite(r))) throw InvalidInput("ANN radius must be positive");
  for (const Curve& c : curves_) require_splittable(c);
  rank_ = id_ranks(curves_);
  const double alpha = eps * r / (2 * std::numbers::sqrt2);
  std::vector<Box> extents;
  for (const Curve& c : curves_) {
    first_.emplace_back(c.vertices.front(), eps, alpha, r);
    last_.emplace_back(c.vertices.back(), eps, alpha, r);
    extents.push_back(first_.back().extent());
  }
  stab_ = StabbingTree(extents);
  if (curves_.empty()) return;

  const std::size_t n = curves_.size();
  const std::size_t k = cells_per_grid();
  double vertices = 0;
  for (const Curve& c : curves_) vertices += static_cast<double>(c.size());
  if (static_cast<double>(n) * static_cast<double>(k * k) * vertices > options.eager_work) return;

  std::vector<std::uint32_t> order(n);
  for (std::uint32_t j = 0; j < n; ++j) order[rank_[j]] = j;
  table_.assign(n * k * k, 0);
  std::vector<double> best(k * k);
  std::vector<double> pre;
  std::vector<double> suf;
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(best.begin(), best.end(), kInf);
    for (std::uint32_t c : order) {
      const Curve& curve = curves_[c];
      const std::size_t splits = curve.size() - 1;
      // pre[g][i-1]: farthest of the first i vertices from c_g; suf[h][i-1]: of the rest
      pre.assign(k * splits, 0.0);
      suf.assign(k * splits, 0.0);
      for (std::size_t g = 0; g < k; ++g) {
        const Point a = first_[j].cell(g).center;
        const Point b = last_[j].cell(g).center;
        double run = 0.0;
        for (std::size_t i = 0; i < splits; ++i) {
          run = std::max(run, l2_distance(a, curve[i]));
          pre[g * splits + i] = run;
        }
        run = 0.0;
        for (std::size_t i = splits; i-- > 0;) {
          run = std::max(run, l2_distance(b, curve[i + 1]));
          suf[g * splits + i] = run;
        }
      }
      for (std::size_t g = 0; g < k; ++g) {
        const double* p = &pre[g * splits];
        for (std::size_t h = 0; h < k; ++h) {
          const double* s = &suf[h * splits];
          double& slot = best[g * k + h];
          if (std::max(p[0], s[splits - 1]) >= slot) continue;
          double value = kInf;
          for (std::size_t i = 0; i < splits; ++i) value = std::min(value, std::max(p[i], s[i]));
          if (value < slot) {
            slot = value;
            table_[(j * k + g) * k + h] = c;
          }
        }
      }
    }
  }
}

std::uint32_t AnnIndex::compute_annotation(std::size_t j, std::size_t g, std::size_t h) const {
  const Point a = first_[j].cell(g).center;
  const Point b = last_[j].cell(h).center;
  std::uint32_t winner = 0;
  double best = kInf;
  for (std::uint32_t c = 0; c < curves_.size(); ++c) {
    const double d = dfd_segment_curve(a, b, curves_[c].vertices, Metric::kL2).distance;
    if (d < best || (d == best && rank_[c] < rank_[winner])) {
      best = d;
      winner = c;
    }
  }
  return winner;
}

std::size_t AnnIndex::annotation(std::size_t j, std::size_t g, std::size_t h) const {
  const std::size_t k = cells_per_grid();
  if (eager()) return table_[(j * k + g) * k + h];
  const std::uint64_t key = (static_cast<std::uint64_t>(j) * k + g) * k + h;
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const std::uint32_t value = compute_annotation(j, g, h);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  memo_.emplace(key, value);
  return value;
}

std::optional<AnnHit> AnnIndex::query(const Segment& s) const {
  validate(s);
  std::vector<std::size_t> candidates;
  for (std::uint32_t j : stab_.stab(s.a)) {
    if (l2_distance(s.a, curves_[j].vertices.front()) > r_) continue;
    if (l2_distance(s.b, curves_[j].vertices.back()) > r_) continue;
    const auto g = first_[j].locate(s.a);
    const auto h = last_[j].locate(s.b);
    if (!g || !h) continue;
    candidates.push_back(annotation(j, *g, *h));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::optional<AnnHit> best;
  for (std::size_t c : candidates) {
    const double d = dfd_segment_curve(s, curves_[c], Metric::kL2).distance;
    if (!best || d < best->distance || (d == best->distance && rank_[c] < rank_[best->index])) {
      best = AnnHit{c, curves_[c].id, (1 + eps_) * r_, d};
    }
  }
  if (best && best->distance > best->bound) return std::nullopt;
  return best;
}

AnnLadder::AnnLadder(std::vector<Curve> curves, double eps, double rmin, double rmax,
                     AnnIndex::Options options)
    : curves_(std::move(curves)), eps_(eps), options_(options) {
  require_eps(eps);
  if (!(rmin > 0.0 && rmin <= rmax && std::isfinite(rmax))) {
    throw InvalidInput("ladder range needs 0 < rmin <= rmax");
  }
  double r = rmin;
  radii_.push_back(r);
  while (r < rmax) {
    r *= 1 + eps;
    radii_.push_back(r);
  }
  rungs_.resize(radii_.size());
}

const AnnIndex& AnnLadder::rung(std::size_t t) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!rungs_[t]) rungs_[t] = std::make_unique<AnnIndex>(curves_, eps_, radii_[t], options_);
  return *rungs_[t];
}

std::optional<AnnHit> AnnLadder::query_rung(std::size_t t, const Segment& s) const {
  return rung(t).query(s);
}

std::optional<Neighbor> AnnLadder::query(const Segment& s) const {
  for (std::size_t t = 0; t < radii_.size(); ++t) {
    if (auto hit = query_rung(t, s)) return Neighbor{hit->index, hit->id, hit->distance};
  }
  return std::nullopt;
}

std::size_t kgon_sides(double eps) {
  require_eps(eps);
  std::size_t k = 3;
  while (1.0 / std::cos(std::numbers::pi / static_cast<double>(k)) > 1.0 + eps) ++k;
  return k;
}

KgonIndex::KgonIndex(std::vector<Segment> segments, double eps) : segments_(std::move(segments)) {
  if (segments_.empty()) throw BuildError("segment index needs at least one segment");
  const std::size_t k = kgon_sides(eps);
  for (std::size_t t = 0; t < k; ++t) {
    const double angle = 2 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(k);
    normals_.push_back({std::cos(angle), std::sin(angle)});
  }
  const auto rank = id_ranks(segments_);
  by_rank_.resize(segments_.size());
  std::vector<double> keys;
  std::vector<Ranked> scores;
  for (std::uint32_t s = 0; s < segments_.size(); ++s) {
    validate(segments_[s]);
    by_rank_[rank[s]] = s;
    for (const Point& n : normals_) keys.push_back(dot(segments_[s].a, n));
    for (const Point& n : normals_) keys.push_back(dot(segments_[s].b, n));
    scores.push_back(Ranked{0.0, rank[s]});
  }
  tree_ = MultiLevelTree(2 * k, std::move(keys), std::move(scores));
}

std::optional<std::size_t> KgonIndex::decide(const Curve& q, double d) const {
  if (!(d >= 0.0)) throw InvalidInput("query distance must be non-negative");
  validate(q);
  if (q.size() < 2) throw InvalidInput("query curve '" + q.id + "' needs at least 2 vertices");
  const std::size_t k = normals_.size();
  const std::size_t m = q.size();
  // pre[i][t] = min over the first i+1 vertices of p . n_t; suf[i][t] over vertices i..m-1
  std::vector<double> pre(m * k);
  std::vector<double> suf(m * k);
  for (std::size_t t = 0; t < k; ++t) {
    double run = kInf;
    for (std::size_t i = 0; i < m; ++i) pre[i * k + t] = run = std::min(run, dot(q[i], normals_[t]));
    run = kInf;
    for (std::size_t i = m; i-- > 0;) suf[i * k + t] = run = std::min(run, dot(q[i], normals_[t]));
  }
  std::vector<Bound> bounds(2 * k);
  std::optional<std::uint32_t> best;
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      const double lo_a = pre[(i - 1) * k + t];
      const double lo_b = suf[i * k + t];
      bounds[t] = Bound::at_most(lo_a + d + 1e-12 * (1 + std::abs(lo_a) + d));
      bounds[k + t] = Bound::at_most(lo_b + d + 1e-12 * (1 + std::abs(lo_b) + d));
    }
    const auto hit = tree_.query_min(bounds);
    if (hit && (!best || hit->best.id < *best)) best = hit->best.id;
  }
  if (!best) return std::nullopt;
  return by_rank_[*best];
}

Neighbor KgonIndex::nearest(const Curve& q) const {
  validate(q);
  if (q.size() < 2) throw InvalidInput("query curve '" + q.id + "' needs at least 2 vertices");
  const std::size_t m = q.size();
  auto accept = [&](double d) { return decide(q, d).has_value(); };
  double best = kInf;
  std::vector<double> family;
  for (int role = 0; role < 2; ++role) {
    for (const Point& n : normals_) {
      family.clear();
      for (std::size_t v = role == 0 ? 0 : 1; v < (role == 0 ? m - 1 : m); ++v) {
        const double pv = dot(q[v], n);
        for (const Segment& s : segments_) {
          const double gap = dot(role == 0 ? s.a : s.b, n) - pv;
          if (gap >= 0.0) family.push_back(gap);
        }
      }
      std::sort(family.begin(), family.end());
      family.erase(std::unique(family.begin(), family.end()), family.end());
      auto value = [&](std::size_t idx) { return family[idx]; };
      if (auto d = smallest_accepted(family.size(), value, accept, best)) best = *d;
    }
  }
  const auto winner = decide(q, best);
  if (!winner) throw std::logic_error("nearest: candidate search lost its witness");
  const Segment& s = segments_[*winner];
  return {*winner, s.id, dfd_segment_curve(s, q, Metric::kL2).distance};
}

}  // namespace curveprox
