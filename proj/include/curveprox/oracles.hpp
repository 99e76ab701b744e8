#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "curveprox/geometry.hpp"
#include "curveprox/neighbor.hpp"

/// Deliberately naive reference implementations. They only share the Point, Curve and
/// Segment types and the point metrics with the optimized code.
namespace curveprox::oracles {

/// Full-table discrete Fréchet distance.
double frechet_table(std::span<const Point> p, std::span<const Point> q, Metric metric);

/// min over translations t of the L∞ discrete Fréchet distance between s + t and c.
double translation_distance_brute(const Segment& s, const Curve& c);

/// Linear scan for the curve nearest to s; ties go to the smallest id.
Neighbor nn_brute(const std::vector<Curve>& curves, const Segment& s, Metric metric,
                  bool translation);
/// Linear scan for the segment nearest to q; ties go to the smallest id.
Neighbor nn_brute(const std::vector<Segment>& segments, const Curve& q, Metric metric,
                  bool translation);

struct BruteCenter {
  double radius = 0.0;
  std::vector<std::size_t> splits;  // prefix length per curve
};

/// Largest number of split assignments center_brute will enumerate.
inline constexpr std::size_t kCenterBruteLimit = 1'000'000;

/// Exhaustive (1,2)-center over every split assignment. Translation is L∞ only.
BruteCenter center_brute(const std::vector<Curve>& curves, Metric metric, bool translation);

/// Smallest enclosing disk radius by pair and triple enumeration.
double enclosing_radius_brute(const std::vector<Point>& points);

struct OracleReport {
  std::string query;
  double oracle = 0.0;
  double structure = 0.0;
  double discrepancy = 0.0;
  bool match = false;
};

OracleReport compare(std::string query, double oracle, double structure, double tolerance);

}  // namespace curveprox::oracles
