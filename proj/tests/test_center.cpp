#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curveprox/center.hpp"
#include "curveprox/oracles.hpp"
#include "test_support.hpp"

namespace curveprox {
namespace {

using testing::random_curves;

const std::vector<Curve> kParallel{Curve{"low", {{0, 0}, {10, 0}}}, Curve{"high", {{0, 2}, {10, 2}}}};

TEST(PrefixBitTree, LongestCoveredPrefix) {
  PrefixBitTree tree(5);
  EXPECT_EQ(tree.covered_prefix(), 0u);
  tree.set(1);
  EXPECT_EQ(tree.covered_prefix(), 0u);
  tree.set(0);
  EXPECT_EQ(tree.covered_prefix(), 2u);
  tree.set(3);
  tree.set(4);
  EXPECT_EQ(tree.covered_prefix(), 2u);
  tree.set(2);
  EXPECT_EQ(tree.covered_prefix(), 5u);
}

TEST(PrefixBitTree, MatchesRunningScan) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    PrefixBitTree tree(n);
    std::vector<bool> bits(n, false);
    for (int step = 0; step < 60; ++step) {
      const std::size_t p = rng() % n;
      tree.set(p);
      bits[p] = true;
      std::size_t run = 0;
      while (run < n && bits[run]) ++run;
      EXPECT_EQ(tree.covered_prefix(), run);
    }
  }
}

TEST(CenterLinf, ParallelCurves) {
  const CenterSolution s = center_linf(kParallel);
  EXPECT_EQ(s.radius, 1.0);
  EXPECT_LE(solution_cost(s, kParallel), 1.0);
}

TEST(CenterLinf, SingleSegmentCurve) {
  const std::vector<Curve> one{Curve{"a", {{3, 4}, {9, -1}}}};
  const CenterSolution s = center_linf(one);
  EXPECT_EQ(s.radius, 0.0);
  EXPECT_EQ(s.a, (Point{3, 4}));
  EXPECT_EQ(s.b, (Point{9, -1}));
}

TEST(CenterLinf, RejectsShortCurves) {
  EXPECT_THROW(center_linf({Curve{"a", {{0, 0}}}}), InvalidInput);
  EXPECT_THROW(center_linf({}), InvalidInput);
}

TEST(CenterLinf, MatchesAssignmentOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const auto curves = random_curves(rng, 1 + rng() % 4, 2, 4, 0, 20);
    const CenterSolution s = center_linf(curves);
    EXPECT_EQ(s.radius, oracles::center_brute(curves, Metric::kLinf, false).radius);
    EXPECT_LE(solution_cost(s, curves), s.radius + 1e-9);
  }
}

TEST(CenterLinfTranslation, SingleCurveIsFree) {
  const std::vector<Curve> one{Curve{"a", {{0, 0}, {8, 0}}}};
  EXPECT_EQ(center_linf_translation(one).radius, 0.0);
}

TEST(CenterLinfTranslation, LengthMismatch) {
  const std::vector<Curve> two{Curve{"a", {{0, 0}, {8, 0}}}, Curve{"b", {{0, 0}, {6, 0}}}};
  const CenterSolution s = center_linf_translation(two);
  EXPECT_EQ(s.radius, 0.5);
  EXPECT_EQ(oracles::center_brute(two, Metric::kLinf, true).radius, 0.5);
  EXPECT_LE(solution_cost(s, two), 0.5 + 1e-12);
}

TEST(CenterLinfTranslation, LowerBoundIsTightPerSplit) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto curves = random_curves(rng, 1 + rng() % 3, 2, 5, 0, 20);
    double dx = 0, dy = 0;
    for (const Curve& c : curves) {
      dx = std::max(dx, bounding_box(c.vertices).width());
      dy = std::max(dy, bounding_box(c.vertices).height());
    }
    const Curve& c = curves[0];
    const PartitionProfile profile(c.vertices);
    for (std::size_t i = 1; i < c.size(); ++i) {
      for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
          const double r = r_lower_bound(profile, i, sx, sy, dx, dy);
          // feasible at r: the prefix and suffix fit their corner squares of [0,dx]x[0,dy]
          auto fits = [&](double rr) {
            auto axis = [&](int s, double ext, double plo, double phi, double slo, double shi) {
              const double alo = s > 0 ? 0 : ext - 2 * rr, ahi = s > 0 ? 2 * rr : ext;
              const double blo = s > 0 ? ext - 2 * rr : 0, bhi = s > 0 ? ext : 2 * rr;
              return std::max(alo - plo, blo - slo) <= std::min(ahi - phi, bhi - shi) + 1e-12;
            };
            const Box& p = profile.prefix(i);
            const Box& q = profile.suffix(i);
            return axis(sx, dx, p.min_x, p.max_x, q.min_x, q.max_x) &&
                   axis(sy, dy, p.min_y, p.max_y, q.min_y, q.max_y);
          };
          EXPECT_TRUE(fits(r));
          EXPECT_FALSE(fits(r - 1e-6));
        }
      }
    }
  }
}

TEST(CenterLinfTranslation, MatchesAssignmentOracle) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    const auto curves = random_curves(rng, 1 + rng() % 4, 2, 4, 0, 20);
    const CenterSolution s = center_linf_translation(curves);
    EXPECT_EQ(s.radius, oracles::center_brute(curves, Metric::kLinf, true).radius);
    EXPECT_LE(solution_cost(s, curves), s.radius + 1e-9);
    EXPECT_LE(s.radius, center_linf(curves).radius);
  }
}

TEST(CandidateRadii, SmallSets) {
  EXPECT_EQ(candidate_radii({Curve{"a", {{0, 0}, {2, 0}}}}), (std::vector<double>{0.0, 1.0}));
  const auto tri = candidate_radii({Curve{"t", {{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}}});
  ASSERT_EQ(tri.size(), 3u);
  EXPECT_EQ(tri[0], 0.0);
  EXPECT_NEAR(tri[1], 0.5, 1e-12);
  EXPECT_NEAR(tri[2], 1 / std::sqrt(3.0), 1e-12);
}

TEST(CenterL2Decision, SingleCurveAtZero) {
  const auto d = center_l2_decision({Curve{"a", {{0, 0}, {10, 0}}}}, 0.0);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->a, (Point{0, 0}));
  EXPECT_EQ(d->b, (Point{10, 0}));
  EXPECT_THROW(center_l2_decision(kParallel, -1.0), InvalidInput);
}

TEST(CenterL2Decision, ParallelCurves) {
  const auto d = center_l2_decision(kParallel, 1.0);
  ASSERT_TRUE(d.has_value());
  EXPECT_NEAR(d->a.x, 0.0, 1e-9);
  EXPECT_NEAR(d->a.y, 1.0, 1e-9);
  EXPECT_NEAR(d->b.x, 10.0, 1e-9);
  EXPECT_NEAR(d->b.y, 1.0, 1e-9);
  EXPECT_FALSE(center_l2_decision(kParallel, 0.99).has_value());
}

TEST(CenterL2Decision, MonotoneInRadius) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 40; ++trial) {
    const auto curves = random_curves(rng, 1 + rng() % 3, 2, 3, 0, 10);
    bool seen = false;
    for (double r = 0; r <= 8; r += 0.25) {
      const bool now = center_l2_decision(curves, r).has_value();
      if (seen) EXPECT_TRUE(now);
      seen = seen || now;
    }
  }
}

TEST(CenterL2, SmallExamples) {
  EXPECT_EQ(center_l2({Curve{"a", {{1, 1}, {4, 5}}}}).radius, 0.0);
  EXPECT_NEAR(center_l2(kParallel).radius, 1.0, 1e-9);
}

TEST(CenterL2, MatchesAssignmentOracle) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 150; ++trial) {
    const auto curves = random_curves(rng, 1 + rng() % 3, 2, 3, 0, 20);
    const CenterSolution s = center_l2(curves);
    const double brute = oracles::center_brute(curves, Metric::kL2, false).radius;
    EXPECT_NEAR(s.radius, brute, 1e-9);
    EXPECT_LE(solution_cost(s, curves), s.radius + 1e-9);
    const auto radii = candidate_radii(curves);
    EXPECT_TRUE(std::any_of(radii.begin(), radii.end(),
                            [&](double r) { return std::abs(r - brute) <= 1e-9; }));
  }
}

TEST(Center, OrderRelations) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    const auto curves = random_curves(rng, 1 + rng() % 3, 2, 4, 0, 20);
    const double fixed = center_linf(curves).radius;
    const double l2 = center_l2(curves).radius;
    EXPECT_LE(center_linf_translation(curves).radius, fixed);
    EXPECT_LE(fixed, l2 + 1e-9);
    EXPECT_LE(l2, std::numbers::sqrt2 * fixed + 1e-9);
  }
}

TEST(CenterBrute, DuplicateCurveKeepsRadius) {
  std::mt19937_64 rng(48);
  auto curves = random_curves(rng, 2, 2, 4, 0, 20);
  const double before = oracles::center_brute(curves, Metric::kLinf, false).radius;
  curves.push_back(curves[0]);
  EXPECT_EQ(oracles::center_brute(curves, Metric::kLinf, false).radius, before);
  EXPECT_EQ(oracles::center_brute(kParallel, Metric::kLinf, false).radius, 1.0);
  EXPECT_NEAR(oracles::center_brute(kParallel, Metric::kL2, false).radius, 1.0, 1e-12);
}

TEST(CenterBrute, RefusesHugeEnumeration) {
  std::vector<Curve> curves;
  std::mt19937_64 rng(49);
  for (int j = 0; j < 8; ++j) curves.push_back(testing::random_curve(rng, 8));
  EXPECT_THROW(oracles::center_brute(curves, Metric::kLinf, false), InvalidInput);
}

}  // namespace
}  // namespace curveprox
