#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "curveprox/frechet.hpp"
#include "curveprox/geometry.hpp"

namespace curveprox {

/// Segment ab with radius r such that every curve (after its translation) has a split
/// whose prefix lies in the ball B(a, r) and whose suffix lies in B(b, r).
struct CenterSolution {
  Metric metric = Metric::kLinf;
  bool translation = false;
  Point a;
  Point b;
  double radius = 0.0;
  std::vector<std::size_t> splits;   // prefix length per curve
  std::vector<Point> translations;   // zero unless translation is set
};

/// Largest discrete Fréchet distance from the solution segment to a (translated) curve.
double solution_cost(const CenterSolution& solution, const std::vector<Curve>& curves);

/// Balanced tree over a curve's vertices with a covered bit per leaf and the AND of
/// each subtree at internal nodes.
class PrefixBitTree {
 public:
  explicit PrefixBitTree(std::size_t size);

  void set(std::size_t position);
  /// Largest i such that positions 0..i-1 are all set.
  std::size_t covered_prefix() const;

 private:
  std::size_t size_;
  std::size_t leaves_;
  std::vector<char> bits_;
};

/// Exact (1,2)-center under L∞ by corner sweeps.
CenterSolution center_linf(const std::vector<Curve>& curves);

/// Lower bound on the radius for split i of one curve when a and b take the corners of
/// the global rectangle [0, dx] x [0, dy] given by the signs (sx, sy).
double r_lower_bound(const PartitionProfile& profile, std::size_t i, int sx, int sy, double dx,
                     double dy);

/// Exact (1,2)-center under L∞ when each curve may be translated.
CenterSolution center_linf_translation(const std::vector<Curve>& curves);

struct L2Decision {
  Point a;
  Point b;
  std::vector<std::size_t> splits;
};

/// Segment within L2 discrete Fréchet distance r of every curve, if one exists.
std::optional<L2Decision> center_l2_decision(const std::vector<Curve>& curves, double r);

/// 0, half of every vertex-pair distance and the circumradius of every acute vertex
/// triangle; sorted without duplicates.
std::vector<double> candidate_radii(const std::vector<Curve>& curves);

/// Exact (1,2)-center under L2 by binary search over candidate_radii.
CenterSolution center_l2(const std::vector<Curve>& curves);

}  // namespace curveprox
