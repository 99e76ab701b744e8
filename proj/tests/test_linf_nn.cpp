#include <gtest/gtest.h>

#include <random>

#include "curveprox/frechet.hpp"
#include "curveprox/linf_nn.hpp"
#include "curveprox/oracles.hpp"
#include "test_support.hpp"

namespace curveprox {
namespace {

using testing::random_curve;
using testing::random_curves;
using testing::random_segment;
using testing::random_segments;

TEST(SegmentQueryIndex, CountsOneKeyPerSplit) {
  EXPECT_EQ(SegmentQueryIndex({Curve{"a", {{0, 0}, {1, 1}}}}).key_count(), 1u);
  std::mt19937_64 rng(1);
  std::vector<Curve> curves;
  for (int k = 0; k < 6; ++k) curves.push_back(random_curve(rng, 5, 0, 100, std::to_string(k)));
  EXPECT_EQ(SegmentQueryIndex(curves).key_count(), 6u * 4u);
}

TEST(SegmentQueryIndex, RejectsSingleVertexCurve) {
  try {
    SegmentQueryIndex index({Curve{"lonely", {{0, 0}}}});
    FAIL();
  } catch (const BuildError& e) {
    EXPECT_NE(std::string(e.what()).find("lonely"), std::string::npos);
  }
}

TEST(SegmentQueryIndex, DecideAtAndBelowOffset) {
  const SegmentQueryIndex index({Curve{"line", {{0, 1}, {10, 1}}}});
  const Segment s{"q", {0, 0}, {10, 0}};
  EXPECT_EQ(index.decide(s, 1.0), std::optional<std::size_t>(0));
  EXPECT_FALSE(index.decide(s, 0.5));
  EXPECT_THROW(index.decide(s, -1.0), InvalidInput);
}

TEST(SegmentQueryIndex, NearestOfTwoLines) {
  const SegmentQueryIndex index(
      {Curve{"C2", {{0, 5}, {10, 5}}}, Curve{"C1", {{0, 1}, {10, 1}}}});
  const Neighbor hit = index.nearest(Segment{"q", {0, 0}, {10, 0}});
  EXPECT_EQ(hit.id, "C1");
  EXPECT_EQ(hit.distance, 1.0);
  const Neighbor exact = index.nearest(Segment{"q", {0, 5}, {10, 5}});
  EXPECT_EQ(exact.id, "C2");
  EXPECT_EQ(exact.distance, 0.0);
}

TEST(SegmentQueryIndex, EmptyIndexRejectsNearest) {
  const SegmentQueryIndex index(std::vector<Curve>{});
  EXPECT_THROW(index.nearest(Segment{"q", {0, 0}, {1, 1}}), InvalidInput);
}

TEST(SegmentQueryIndex, DecisionMatchesBruteScan) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto curves = random_curves(rng, 1 + rng() % 30, 2, 12);
    const SegmentQueryIndex index(curves);
    for (int q = 0; q < 25; ++q) {
      const Segment s = random_segment(rng);
      const double d = static_cast<double>(rng() % 60);
      bool brute = false;
      for (const Curve& c : curves) brute = brute || dfd_segment_curve(s, c, Metric::kLinf).distance <= d;
      const auto hit = index.decide(s, d);
      ASSERT_EQ(hit.has_value(), brute);
      if (hit) EXPECT_LE(dfd_segment_curve(s, curves[*hit], Metric::kLinf).distance, d);
      // monotone in d
      if (hit) EXPECT_TRUE(index.decide(s, d + 0.5).has_value());
    }
  }
}

TEST(SegmentQueryIndex, NearestMatchesBruteScan) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto curves = random_curves(rng, 1 + rng() % 50, 2, 20);
    const SegmentQueryIndex index(curves);
    for (int q = 0; q < 10; ++q) {
      const Segment s = random_segment(rng);
      const Neighbor got = index.nearest(s);
      const Neighbor want = oracles::nn_brute(curves, s, Metric::kLinf, false);
      EXPECT_EQ(got.id, want.id);
      EXPECT_EQ(got.distance, want.distance);
    }
  }
}

TEST(SegmentQueryIndex, SoundUnderNestingCut) {
  std::mt19937_64 rng(4);
  const auto curves = random_curves(rng, 40, 2, 10, 0, 20);
  MultiLevelTree::Options options;
  options.max_nested_levels = 2;
  options.leaf_size = 2;
  const SegmentQueryIndex index(curves, options);
  EXPECT_EQ(index.tree().nested_levels(), 2u);
  for (int q = 0; q < 50; ++q) {
    const Segment s = random_segment(rng, 0, 20);
    EXPECT_EQ(index.nearest(s).distance, oracles::nn_brute(curves, s, Metric::kLinf, false).distance);
  }
}

TEST(SegmentEndpointTree, RejectsEmpty) {
  EXPECT_THROW(SegmentEndpointTree(std::vector<Segment>{}), BuildError);
}

TEST(SegmentEndpointTree, PointRectanglesFindOwnSegment) {
  const SegmentEndpointTree tree({Segment{"s", {1, 2}, {3, 4}}});
  EXPECT_EQ(tree.report({Box{1, 1, 2, 2}, Box{3, 3, 4, 4}}), std::vector<std::size_t>{0});
  EXPECT_TRUE(tree.report({Box{5, 6, 5, 6}, Box{3, 3, 4, 4}}).empty());
}

TEST(SegmentEndpointTree, RectanglePairsMatchLinearScan) {
  std::mt19937_64 rng(5);
  const auto segments = random_segments(rng, 150, 0, 30);
  const SegmentEndpointTree tree(segments);
  std::uniform_int_distribution<int> coord(0, 30);
  for (int q = 0; q < 200; ++q) {
    auto box = [&] {
      const int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
      return Box{double(std::min(x0, x1)), double(std::max(x0, x1)), double(std::min(y0, y1)),
                 double(std::max(y0, y1))};
    };
    const RectanglePair pair{box(), box()};
    std::vector<std::size_t> expected;
    for (std::size_t k = 0; k < segments.size(); ++k) {
      if (pair.start.contains(segments[k].a) && pair.end.contains(segments[k].b)) expected.push_back(k);
    }
    EXPECT_EQ(tree.report(pair), expected);
  }
}

TEST(SegmentEndpointTree, DecideAtAndBelowOffset) {
  const SegmentEndpointTree tree({Segment{"s", {0, 1}, {10, 1}}});
  const Curve q{"q", {{0, 0}, {10, 0}}};
  EXPECT_TRUE(tree.decide(q, 1.0));
  EXPECT_FALSE(tree.decide(q, 0.9));
  EXPECT_THROW(tree.decide(Curve{"p", {{0, 0}}}, 1.0), InvalidInput);
}

TEST(SegmentEndpointTree, NearestOfTwo) {
  const SegmentEndpointTree tree({Segment{"s1", {0, 1}, {10, 1}}, Segment{"s2", {0, 7}, {10, 7}}});
  const Neighbor hit = tree.nearest(Curve{"q", {{0, 0}, {10, 0}}});
  EXPECT_EQ(hit.id, "s1");
  EXPECT_EQ(hit.distance, 1.0);
  const Neighbor exact = tree.nearest(Curve{"q", {{0, 7}, {10, 7}}});
  EXPECT_EQ(exact.id, "s2");
  EXPECT_EQ(exact.distance, 0.0);
}

TEST(SegmentEndpointTree, DecisionAndNearestMatchBruteScan) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto segments = random_segments(rng, 1 + rng() % 50);
    const SegmentEndpointTree tree(segments);
    for (int q = 0; q < 10; ++q) {
      const Curve query = random_curve(rng, 2 + rng() % 19);
      const double d = static_cast<double>(rng() % 60);
      bool brute = false;
      for (const Segment& s : segments) brute = brute || dfd_segment_curve(s, query, Metric::kLinf).distance <= d;
      EXPECT_EQ(tree.decide(query, d).has_value(), brute);
      const Neighbor got = tree.nearest(query);
      const Neighbor want = oracles::nn_brute(segments, query, Metric::kLinf, false);
      EXPECT_EQ(got.id, want.id);
      EXPECT_EQ(got.distance, want.distance);
    }
  }
}

}  // namespace
}  // namespace curveprox
