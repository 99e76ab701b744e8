#include <gtest/gtest.h>

#include <random>

#include "curveprox/multilevel_tree.hpp"

namespace curveprox {
namespace {

struct Fixture {
  std::size_t levels;
  std::vector<double> keys;
  std::vector<Ranked> scores;
};

Fixture random_fixture(std::mt19937_64& rng, std::size_t n, std::size_t levels, int range) {
  std::uniform_int_distribution<int> coord(0, range);
  Fixture f{levels, {}, {}};
  for (std::size_t item = 0; item < n; ++item) {
    for (std::size_t l = 0; l < levels; ++l) f.keys.push_back(coord(rng));
    f.scores.push_back(Ranked{static_cast<double>(coord(rng) % 5), static_cast<std::uint32_t>(item)});
  }
  return f;
}

std::vector<Bound> random_bounds(std::mt19937_64& rng, std::size_t levels, int range) {
  std::uniform_int_distribution<int> coord(-2, range + 2);
  std::vector<Bound> bounds;
  for (std::size_t l = 0; l < levels; ++l) {
    switch (rng() % 3) {
      case 0:
        bounds.push_back(Bound::at_most(coord(rng)));
        break;
      case 1:
        bounds.push_back(Bound::at_least(coord(rng)));
        break;
      default: {
        const double a = coord(rng);
        const double b = coord(rng);
        bounds.push_back({std::min(a, b), std::max(a, b)});
      }
    }
  }
  return bounds;
}

std::vector<std::uint32_t> brute_filter(const Fixture& f, const std::vector<Bound>& bounds) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t item = 0; item < f.scores.size(); ++item) {
    bool ok = true;
    for (std::size_t l = 0; l < f.levels; ++l) ok = ok && bounds[l].contains(f.keys[item * f.levels + l]);
    if (ok) out.push_back(item);
  }
  return out;
}

void check_against_brute(std::size_t levels, std::size_t max_nested, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 120;
    Fixture f = random_fixture(rng, n, levels, 12);
    MultiLevelTree::Options options;
    options.leaf_size = 1 + rng() % 4;
    options.max_nested_levels = max_nested;
    const MultiLevelTree tree(levels, f.keys, f.scores, options);
    for (int q = 0; q < 40; ++q) {
      const auto bounds = random_bounds(rng, levels, 12);
      const auto expected = brute_filter(f, bounds);
      EXPECT_EQ(tree.report(bounds), expected);
      const auto hit = tree.query_min(bounds);
      ASSERT_EQ(hit.has_value(), !expected.empty());
      if (!hit) continue;
      Ranked best = f.scores[expected[0]];
      for (std::uint32_t item : expected) best = std::min(best, f.scores[item]);
      EXPECT_EQ(hit->best, best);
      EXPECT_EQ(f.scores[hit->item], best);
    }
  }
}

TEST(MultiLevelTree, FullyNestedMatchesBruteFilter) {
  for (std::size_t levels = 1; levels <= 4; ++levels) check_against_brute(levels, levels, 100 + levels);
}

TEST(MultiLevelTree, KdTerminalsMatchBruteFilter) {
  for (std::size_t nested = 0; nested <= 3; ++nested) check_against_brute(5, nested, 200 + nested);
}

TEST(MultiLevelTree, EightLevelsWithBudgetCut) {
  check_against_brute(8, SIZE_MAX, 300);
}

TEST(MultiLevelTree, EmptyAndSingle) {
  const MultiLevelTree empty(2, {}, {});
  const std::vector<Bound> any(2);
  EXPECT_FALSE(empty.any(any));
  const MultiLevelTree one(2, {1.0, 2.0}, {Ranked{0, 7}});
  EXPECT_TRUE(one.any(any));
  EXPECT_EQ(one.query_min(any)->item, 0u);
  const std::vector<Bound> miss{Bound::at_most(0.5), Bound{}};
  EXPECT_FALSE(one.any(miss));
  const std::vector<Bound> point{Bound{1.0, 1.0}, Bound{2.0, 2.0}};
  EXPECT_TRUE(one.any(point));
}

TEST(MultiLevelTree, BudgetLimitsNesting) {
  std::mt19937_64 rng(5);
  Fixture f = random_fixture(rng, 5000, 8, 1000);
  MultiLevelTree::Options options;
  options.entry_budget = 200000;
  const MultiLevelTree tree(8, f.keys, f.scores, options);
  EXPECT_LT(tree.nested_levels(), 8u);
  EXPECT_LE(tree.stored_entries(), 200000u + 5000u);
  EXPECT_EQ(MultiLevelTree::estimate_entries(8, tree.nested_levels(), 5000, options.leaf_size),
            tree.stored_entries());
}

TEST(MultiLevelTree, RejectsMismatchedKeys) {
  EXPECT_THROW(MultiLevelTree(2, {1.0}, {Ranked{}}), std::invalid_argument);
}

}  // namespace
}  // namespace curveprox
