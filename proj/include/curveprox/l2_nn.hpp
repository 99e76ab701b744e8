#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "curveprox/geometry.hpp"
#include "curveprox/multilevel_tree.hpp"
#include "curveprox/neighbor.hpp"
#include "curveprox/stabbing_tree.hpp"

namespace curveprox {

struct GridCell {
  Box rect;
  Point center;
};

/// Exponential grid around a point p.
///
/// Cell 0 is the central square of half-side alpha. Level i = 1..L covers the square
/// of half-side 2^i * alpha minus the previous one with a regular grid of side
/// 2^(i+1) * alpha / c, where c = 4 * ceil(sqrt(2) / eps) so the inner square falls on
/// grid lines. L = ceil(log2(beta / alpha)). A point q with |q - p| <= beta lies in a
/// cell whose center is within max(sqrt(2) * alpha, eps * |q - p| / 2) of q.
class ExponentialGrid {
 public:
  ExponentialGrid(Point center, double eps, double alpha, double beta);

  Point center() const { return center_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::size_t levels() const { return levels_; }
  std::size_t cells_per_side() const { return per_side_; }
  std::size_t cell_count() const { return 1 + levels_ * ring_; }
  /// Square covered by all cells.
  Box extent() const;

  GridCell cell(std::size_t index) const;
  /// Index of a cell containing q, or nothing when q is outside the outermost square.
  std::optional<std::size_t> locate(Point q) const;

 private:
  double half_side(std::size_t level) const;

  Point center_;
  double alpha_;
  double beta_;
  std::size_t levels_ = 0;
  std::size_t per_side_ = 0;
  std::size_t ring_ = 0;                 // cells per level
  std::vector<std::int32_t> ring_rank_;  // (row, col) -> rank within a level, -1 inside
  std::vector<std::uint32_t> ring_cell_; // rank -> row * c + col
};

struct AnnHit {
  std::size_t index = 0;
  std::string id;
  double bound = 0.0;     // (1 + eps) * r
  double distance = 0.0;  // exact L2 distance of the returned curve
};

/// (1 + eps, r)-approximate nearest curve to a query segment under L2.
///
/// Every curve gets exponential grids around its first and last vertex over
/// [eps * r / (2 sqrt 2), r]. For each cell pair (g, h) of one curve's two grids the
/// structure stores the curve nearest to the segment between the two cell centers.
/// A query stabs the first-vertex grids containing a, locates b in the matching
/// last-vertex grid, and returns the best annotated curve.
class AnnIndex {
 public:
  struct Options {
    /// Annotations are tabulated at build time when n^2 K^2 m stays below this;
    /// otherwise each one is computed on first use and memoized.
    double eager_work = 5e7;
  };

  AnnIndex(std::vector<Curve> curves, double eps, double r);
  AnnIndex(std::vector<Curve> curves, double eps, double r, Options options);

  double eps() const { return eps_; }
  double radius() const { return r_; }
  bool eager() const { return !table_.empty(); }
  std::size_t cells_per_grid() const { return first_.empty() ? 0 : first_[0].cell_count(); }
  const ExponentialGrid& first_grid(std::size_t j) const { return first_[j]; }
  const ExponentialGrid& last_grid(std::size_t j) const { return last_[j]; }
  const std::vector<Curve>& curves() const { return curves_; }

  /// Curve stored for cell pair (g, h) of curve j's grids.
  std::size_t annotation(std::size_t j, std::size_t g, std::size_t h) const;

  std::optional<AnnHit> query(const Segment& s) const;

 private:
  std::uint32_t compute_annotation(std::size_t j, std::size_t g, std::size_t h) const;

  std::vector<Curve> curves_;
  std::vector<std::uint32_t> rank_;
  double eps_;
  double r_;
  std::vector<ExponentialGrid> first_;
  std::vector<ExponentialGrid> last_;
  StabbingTree stab_;
  std::vector<std::uint32_t> table_;  // eager: [j][g][h]
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<std::uint64_t, std::uint32_t> memo_;
};

/// Geometric ladder of AnnIndex radii rmin (1 + eps)^t, built lazily and cached.
class AnnLadder {
 public:
  AnnLadder(std::vector<Curve> curves, double eps, double rmin, double rmax,
            AnnIndex::Options options = AnnIndex::Options{});

  std::size_t rung_count() const { return radii_.size(); }
  double rung_radius(std::size_t t) const { return radii_[t]; }
  /// Answer at one rung; a hit needs a witness within (1 + eps) times the rung radius.
  std::optional<AnnHit> query_rung(std::size_t t, const Segment& s) const;
  /// First rung that hits. The distance is the witness's exact L2 distance, within
  /// (1 + eps)^2 of optimal whenever the optimum lies in [rmin, rmax].
  std::optional<Neighbor> query(const Segment& s) const;

 private:
  const AnnIndex& rung(std::size_t t) const;

  std::vector<Curve> curves_;
  double eps_;
  AnnIndex::Options options_;
  std::vector<double> radii_;
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<AnnIndex>> rungs_;
};

/// Smallest k >= 3 with 1 / cos(pi / k) <= 1 + eps.
std::size_t kgon_sides(double eps);

/// (1 + eps)-approximate nearest segment to a query curve under L2, replacing the
/// radius-d squares of the L∞ structure by regular k-gons.
class KgonIndex {
 public:
  KgonIndex(std::vector<Segment> segments, double eps);

  std::size_t sides() const { return normals_.size(); }
  const std::vector<Point>& normals() const { return normals_; }

  /// Smallest-id segment whose ends lie in the k-gon intersections of some split.
  std::optional<std::size_t> decide(const Curve& q, double d) const;
  /// The distance is the returned segment's exact L2 distance to q.
  Neighbor nearest(const Curve& q) const;

 private:
  std::vector<Segment> segments_;
  std::vector<std::uint32_t> by_rank_;
  std::vector<Point> normals_;
  MultiLevelTree tree_;
};

}  // namespace curveprox
