#include <gtest/gtest.h>

#include <random>

#include "curveprox/frechet.hpp"
#include "curveprox/linf_nn.hpp"
#include "curveprox/oracles.hpp"
#include "curveprox/translation_nn.hpp"
#include "test_support.hpp"

namespace curveprox {
namespace {

using testing::random_curve;
using testing::random_curves;
using testing::random_point;
using testing::random_segment;
using testing::random_segments;

TEST(TranslationKey, MatchesDirectExtrema) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Curve c = random_curve(rng, 2 + rng() % 10);
    const PartitionProfile profile(c.vertices);
    for (std::size_t i = 1; i < c.size(); ++i) {
      double pminx = INFINITY, pmaxx = -INFINITY, pminy = INFINITY, pmaxy = -INFINITY;
      double sminx = INFINITY, smaxx = -INFINITY, sminy = INFINITY, smaxy = -INFINITY;
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (k < i) {
          pminx = std::min(pminx, c[k].x), pmaxx = std::max(pmaxx, c[k].x);
          pminy = std::min(pminy, c[k].y), pmaxy = std::max(pmaxy, c[k].y);
        } else {
          sminx = std::min(sminx, c[k].x), smaxx = std::max(smaxx, c[k].x);
          sminy = std::min(sminy, c[k].y), smaxy = std::max(smaxy, c[k].y);
        }
      }
      const TranslationKey key = translation_key(profile, i);
      EXPECT_EQ(key.u1, sminx - pmaxx);
      EXPECT_EQ(key.u2, smaxx - pminx);
      EXPECT_EQ(key.u3, sminy - pmaxy);
      EXPECT_EQ(key.u4, smaxy - pminy);
      EXPECT_EQ(key.r, std::max({pmaxx - pminx, pmaxy - pminy, smaxx - sminx, smaxy - sminy}) / 2);
      EXPECT_LE(key.u1, key.u2);
      EXPECT_LE(key.u3, key.u4);
    }
  }
}

TEST(SegmentTranslationIndex, OneKeyPerSplit) {
  EXPECT_EQ(SegmentTranslationIndex({Curve{"a", {{0, 0}, {3, 1}}}}).key_count(), 1u);
  EXPECT_EQ(SegmentTranslationIndex({Curve{"a", {{0, 0}, {3, 1}, {4, 4}}},
                                     Curve{"b", {{0, 0}, {3, 1}, {4, 4}, {5, 5}}}})
                .key_count(),
            5u);
  EXPECT_THROW(SegmentTranslationIndex({Curve{"x", {{0, 0}}}}), BuildError);
}

TEST(SegmentTranslationIndex, CongruentAndStretched) {
  const Segment s{"q", {0, 0}, {6, 0}};
  const SegmentTranslationIndex same({Curve{"c", {{0, 0}, {6, 0}}}});
  EXPECT_TRUE(same.decide(s, 0.0));
  const SegmentTranslationIndex longer({Curve{"c", {{0, 0}, {8, 0}}}});
  // one translation serves both ends, so the length difference 2 is split evenly
  EXPECT_FALSE(longer.decide(s, 0.5));
  EXPECT_FALSE(longer.decide(s, 0.99));
  EXPECT_TRUE(longer.decide(s, 1.0));
  EXPECT_EQ(oracles::translation_distance_brute(s, Curve{"c", {{0, 0}, {8, 0}}}), 1.0);
}

TEST(SegmentTranslationIndex, NearestPrefersHorizontalCurve) {
  const SegmentTranslationIndex index(
      {Curve{"h", {{0, 0}, {8, 0}}}, Curve{"v", {{0, 0}, {0, 9}}}});
  const Neighbor hit = index.nearest(Segment{"q", {0, 0}, {6, 0}});
  EXPECT_EQ(hit.id, "h");
  EXPECT_EQ(hit.distance, 1.0);
  const Neighbor moved = index.nearest(Segment{"q", {40, -7}, {40, 2}});
  EXPECT_EQ(moved.id, "v");
  EXPECT_EQ(moved.distance, 0.0);
}

TEST(SegmentTranslationIndex, DecisionAndNearestMatchOracle) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto curves = random_curves(rng, 1 + rng() % 50, 2, 20);
    const SegmentTranslationIndex index(curves);
    for (int q = 0; q < 10; ++q) {
      const Segment s = random_segment(rng);
      const Neighbor want = oracles::nn_brute(curves, s, Metric::kLinf, true);
      const Neighbor got = index.nearest(s);
      EXPECT_EQ(got.id, want.id);
      EXPECT_EQ(got.distance, want.distance);
      const double d = static_cast<double>(rng() % 30);
      EXPECT_EQ(index.decide(s, d).has_value(), want.distance <= d);
      if (index.decide(s, d)) EXPECT_TRUE(index.decide(s, d + 1));
    }
  }
}

TEST(SegmentTranslationIndex, AxisDegenerateQueries) {
  std::mt19937_64 rng(23);
  const auto curves = random_curves(rng, 30, 2, 8);
  const SegmentTranslationIndex index(curves);
  for (int q = 0; q < 50; ++q) {
    Point a = random_point(rng, 0, 100);
    Point b = random_point(rng, 0, 100);
    if (q % 2) b.x = a.x; else b.y = a.y;
    const Segment s{"q", a, b};
    EXPECT_EQ(index.nearest(s).distance, oracles::nn_brute(curves, s, Metric::kLinf, true).distance);
  }
}

TEST(SegmentTranslationTree, SingleSegmentDifference) {
  const SegmentTranslationTree tree({Segment{"s", {1, 1}, {4, 5}}});
  ASSERT_EQ(tree.differences().size(), 1u);
  EXPECT_EQ(tree.differences()[0], (Point{3, 4}));
  EXPECT_THROW(SegmentTranslationTree(std::vector<Segment>{}), BuildError);
}

TEST(SegmentTranslationTree, RectangleAndWedgeQueriesMatchScan) {
  std::mt19937_64 rng(24);
  const auto segments = random_segments(rng, 120, 0, 40);
  const SegmentTranslationTree tree(segments);
  const auto& c = tree.differences();
  std::uniform_int_distribution<int> coord(-40, 40);
  for (int q = 0; q < 200; ++q) {
    const int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
    const Box rect{double(std::min(x0, x1)), double(std::max(x0, x1)), double(std::min(y0, y1)),
                   double(std::max(y0, y1))};
    std::optional<std::size_t> inside;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (rect.contains(c[k]) && (!inside || segments[k].id < segments[*inside].id)) inside = k;
    }
    EXPECT_EQ(tree.first_in(rect), inside);
    if (inside) continue;
    // outside the rectangle, the first swept point minimizes the L∞ distance to it
    double nearest = INFINITY;
    for (const Point& p : c) {
      nearest = std::min(nearest, std::max({rect.min_x - p.x, p.x - rect.max_x, rect.min_y - p.y,
                                            p.y - rect.max_y}));
    }
    double swept = INFINITY;
    using Edge = SegmentTranslationTree::Edge;
    for (Edge e : {Edge::kRight, Edge::kLeft, Edge::kTop, Edge::kBottom}) {
      if (auto hit = tree.first_beyond(rect, e)) swept = std::min(swept, hit->second);
    }
    EXPECT_EQ(swept, nearest);
  }
}

TEST(SegmentTranslationTree, TwoSegmentsExample) {
  const SegmentTranslationTree tree({Segment{"s1", {0, 0}, {5, 0}}, Segment{"s2", {0, 0}, {0, 5}}});
  const Neighbor hit = tree.nearest(Curve{"q", {{0, 0}, {6, 0}}});
  EXPECT_EQ(hit.id, "s1");
  EXPECT_EQ(hit.distance, 0.5);
  const Neighbor exact = tree.nearest(Curve{"q", {{0, 0}, {5, 0}}});
  EXPECT_EQ(exact.id, "s1");
  EXPECT_EQ(exact.distance, 0.0);
}

TEST(SegmentTranslationTree, NearestMatchesOracle) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto segments = random_segments(rng, 1 + rng() % 50);
    const SegmentTranslationTree tree(segments);
    for (int q = 0; q < 10; ++q) {
      const Curve query = random_curve(rng, 2 + rng() % 19);
      const Neighbor want = oracles::nn_brute(segments, query, Metric::kLinf, true);
      const Neighbor got = tree.nearest(query);
      EXPECT_EQ(got.id, want.id);
      EXPECT_EQ(got.distance, want.distance);
    }
  }
}

TEST(SegmentTranslationTree, DecideReturnsSmallestIdWithinThreshold) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const auto segments = random_segments(rng, 1 + rng() % 40);
    const SegmentTranslationTree tree(segments);
    for (int q = 0; q < 10; ++q) {
      const Curve query = random_curve(rng, 2 + rng() % 12);
      const double d = std::uniform_real_distribution<double>(0, 400)(rng);
      std::optional<std::size_t> want;
      for (std::size_t k = 0; k < segments.size(); ++k) {
        if (oracles::translation_distance_brute(segments[k], query) <= d) {
          if (!want || segments[k].id < segments[*want].id) want = k;
        }
      }
      EXPECT_EQ(tree.decide(query, d), want);
    }
  }
  EXPECT_THROW(SegmentTranslationTree({Segment{"s", {0, 0}, {1, 1}}}).decide(Curve{"q", {{0, 0}, {1, 1}}}, -1),
               InvalidInput);
}

TEST(Translation, InvariantUnderItemTranslations) {
  std::mt19937_64 rng(26);
  auto curves = random_curves(rng, 30, 2, 10);
  auto segments = random_segments(rng, 30);
  const SegmentTranslationIndex index(curves);
  const SegmentTranslationTree tree(segments);
  std::vector<Curve> moved_curves;
  for (const Curve& c : curves) moved_curves.push_back(translated(c, random_point(rng, -500, 500)));
  std::vector<Segment> moved_segments;
  for (const Segment& s : segments) {
    const Point t = random_point(rng, -500, 500);
    moved_segments.push_back(Segment{s.id, s.a + t, s.b + t});
  }
  const SegmentTranslationIndex moved_index(moved_curves);
  const SegmentTranslationTree moved_tree(moved_segments);
  for (int q = 0; q < 30; ++q) {
    const Segment s = random_segment(rng);
    const Neighbor a = index.nearest(s);
    const Neighbor b = moved_index.nearest(s);
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.distance, b.distance);
    const Curve query = random_curve(rng, 2 + rng() % 8);
    const Neighbor c = tree.nearest(query);
    const Neighbor d = moved_tree.nearest(query);
    EXPECT_EQ(c.id, d.id);
    EXPECT_EQ(c.distance, d.distance);
  }
}

TEST(Translation, NeverWorseThanFixedPosition) {
  std::mt19937_64 rng(27);
  const auto curves = random_curves(rng, 25, 2, 10);
  const SegmentTranslationIndex moving(curves);
  const SegmentQueryIndex fixed(curves);
  for (int q = 0; q < 50; ++q) {
    const Segment s = random_segment(rng);
    EXPECT_LE(moving.nearest(s).distance, fixed.nearest(s).distance);
  }
}

}  // namespace
}  // namespace curveprox
