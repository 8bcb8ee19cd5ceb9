#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "fresco/assignment.hpp"
#include "fresco/matching.hpp"
#include "oracles.hpp"

using namespace fresco;

namespace {

CostMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, bool integer) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> small(0, 4);
  CostMatrix c(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = 0; k < cols; ++k) c(r, k) = integer ? small(rng) : u(rng);
  return c;
}

void expect_valid(const CostMatrix& c, const Assignment& a) {
  ASSERT_EQ(a.pairs.size(), std::min(c.rows(), c.cols()));
  EXPECT_EQ(a.unmatched_rows.size(), c.rows() - a.pairs.size());
  EXPECT_EQ(a.unmatched_cols.size(), c.cols() - a.pairs.size());
  std::set<std::size_t> rows, cols;
  double total = 0.0;
  for (const auto& [r, k] : a.pairs) {
    EXPECT_TRUE(rows.insert(r).second);
    EXPECT_TRUE(cols.insert(k).second);
    total += c(r, k);
  }
  for (std::size_t r : a.unmatched_rows) EXPECT_FALSE(rows.contains(r));
  for (std::size_t k : a.unmatched_cols) EXPECT_FALSE(cols.contains(k));
  EXPECT_NEAR(total, a.total_cost, 1e-12);
}

}  // namespace

TEST(Assignment, Empty) {
  const Assignment a = linear_sum_assignment(CostMatrix());
  EXPECT_TRUE(a.pairs.empty());
  EXPECT_EQ(a.total_cost, 0.0);
  const Assignment b = linear_sum_assignment(CostMatrix(0, 3));
  EXPECT_EQ(b.unmatched_cols.size(), 3u);
}

TEST(Assignment, KnownOptimum) {
  const CostMatrix c(3, 3, {4, 1, 3, 2, 0, 5, 3, 2, 2});
  const Assignment a = linear_sum_assignment(c);
  EXPECT_EQ(a.total_cost, 5.0);
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 0}, {2, 2}}));
}

TEST(Assignment, MatchesBruteForceOnRectangles) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    const CostMatrix c = random_matrix(rng, rows, cols, i % 2 == 0);
    const Assignment a = linear_sum_assignment(c);
    expect_valid(c, a);
    EXPECT_NEAR(a.total_cost, oracle::brute_force_assignment(c), 1e-12);
  }
}

TEST(Assignment, TransposeHasSameCost) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const CostMatrix c = random_matrix(rng, 3, 5, false);
    EXPECT_NEAR(linear_sum_assignment(c).total_cost, linear_sum_assignment(c.transposed()).total_cost, 1e-12);
  }
}

TEST(Assignment, DeterministicOnTies) {
  const CostMatrix c(2, 2, 1.0);
  const Assignment a = linear_sum_assignment(c);
  const Assignment b = linear_sum_assignment(c);
  EXPECT_EQ(a.pairs, b.pairs);
}

TEST(Matching, PoolsNeverMix) {
  ImageRecord a = test::blank_record("a"), b = test::blank_record("b");
  a.instances = {test::object("a0", "dog", {0, 0, 10, 10}), test::object("a1", "cat", {500, 500, 10, 10})};
  b.instances = {test::object("b0", "cat", {0, 0, 10, 10}), test::object("b1", "dog", {500, 500, 10, 10})};
  const MatchResult m = match_instances(a, b);
  ASSERT_EQ(m.pairs.size(), 2u);
  for (const MatchedPair& p : m.pairs) {
    EXPECT_EQ(a.instances[p.index_i].category, b.instances[p.index_j].category);
  }
  EXPECT_TRUE(m.unmatched_i.empty());
  EXPECT_TRUE(m.unmatched_j.empty());
}

TEST(Matching, NearestCentroidsPair) {
  ImageRecord a = test::blank_record("a"), b = test::blank_record("b", 2000, 2000);
  a.instances = {test::face("fa", {0, 0, 100, 100}), test::face("fb", {800, 800, 100, 100})};
  // Same normalized positions in a frame twice as large, listed in reverse.
  b.instances = {test::face("gb", {1600, 1600, 200, 200}), test::face("ga", {0, 0, 200, 200})};
  const MatchResult m = match_instances(a, b);
  ASSERT_EQ(m.pairs.size(), 2u);
  EXPECT_EQ(m.total_cost, 0.0);
  for (const MatchedPair& p : m.pairs) EXPECT_EQ(p.id_i.substr(1), p.id_j.substr(1));
}

TEST(Matching, UnmatchedAndSwappedOrder) {
  ImageRecord a = test::blank_record("a"), b = test::blank_record("b");
  a.instances = {test::face("f0", {0, 0, 10, 10}), test::face("f1", {100, 100, 10, 10}),
                 test::object("o0", "dog", {0, 0, 10, 10})};
  b.instances = {test::face("g0", {90, 90, 10, 10})};
  const MatchResult ab = match_instances(a, b);
  const MatchResult ba = match_instances(b, a);
  ASSERT_EQ(ab.pairs.size(), 1u);
  EXPECT_EQ(ab.pairs[0].id_i, "f1");
  EXPECT_EQ(ab.unmatched_i.size(), 2u);
  EXPECT_TRUE(ab.unmatched_j.empty());
  ASSERT_EQ(ba.pairs.size(), 1u);
  EXPECT_EQ(ba.pairs[0].id_i, "g0");
  EXPECT_EQ(ba.pairs[0].id_j, "f1");
  EXPECT_EQ(ba.unmatched_j, ab.unmatched_i);
  EXPECT_EQ(ab.total_cost, ba.total_cost);
}

TEST(Matching, TiedOptimaIndependentOfArgumentOrder) {
  ImageRecord a = test::blank_record("a"), b = test::blank_record("b");
  // Four symmetric placements make both pairings equally cheap.
  a.instances = {test::face("f0", {200, 450, 100, 100}), test::face("f1", {700, 450, 100, 100})};
  b.instances = {test::face("g0", {450, 200, 100, 100}), test::face("g1", {450, 700, 100, 100})};
  const MatchResult ab = match_instances(a, b);
  const MatchResult ba = match_instances(b, a);
  ASSERT_EQ(ab.pairs.size(), ba.pairs.size());
  for (std::size_t i = 0; i < ab.pairs.size(); ++i) {
    EXPECT_EQ(ab.pairs[i].id_i, ba.pairs[i].id_j);
    EXPECT_EQ(ab.pairs[i].id_j, ba.pairs[i].id_i);
  }
}
