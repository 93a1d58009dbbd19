#include <gtest/gtest.h>

#include <limits>

#include "or_graph_kit/assignment.hpp"
#include "or_graph_kit/random.hpp"
#include "support/oracles.hpp"

using namespace orgk;

namespace {

CostMatrix random_dyadic(Rng& rng, std::size_t n, std::size_t m) {
  CostMatrix c(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) c(i, j) = static_cast<double>(rng.below(41)) / 8.0;
  return c;
}

}  // namespace

TEST(SolveAssignment, IdentityCost) {
  CostMatrix c(3, 3, 1.0);
  for (std::size_t i = 0; i < 3; ++i) c(i, i) = 0;
  const auto m = solve_assignment({c, Objective::minimize});
  EXPECT_EQ(m.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}, {2, 2}}));
  EXPECT_EQ(m.total, 0.0);
}

TEST(SolveAssignment, Singleton) {
  const auto m = solve_assignment({CostMatrix(1, 1, 5.0), Objective::minimize});
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0], (std::pair<std::size_t, std::size_t>{0, 0}));
  EXPECT_EQ(m.total, 5.0);
}

TEST(SolveAssignment, RandomFourByFourMatchesAllPermutations) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    CostMatrix c(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) c(i, j) = rng.uniform();
    const auto got = solve_assignment({c, Objective::minimize});
    const auto want = oracle::brute_force_assignment(c, Objective::minimize, 1e-12);
    EXPECT_NEAR(got.total, want.total, 1e-12);
    EXPECT_EQ(got.pairs.size(), 4u);
  }
}

TEST(SolveAssignment, RectangularBothWaysAndMaximize) {
  Rng rng(5);
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t m = 1; m <= 5; ++m)
      for (int t = 0; t < 30; ++t) {
        const auto c = random_dyadic(rng, n, m);
        for (auto mode : {Objective::minimize, Objective::maximize}) {
          const auto got = solve_assignment({c, mode});
          const auto want = oracle::brute_force_assignment(c, mode);
          EXPECT_EQ(got.total, want.total) << n << "x" << m;
          EXPECT_EQ(got.pairs, want.pairs) << n << "x" << m;
        }
      }
}

TEST(SolveAssignment, TiesResolveLexicographically) {
  CostMatrix c(2, 2, 1.0);
  const auto m = solve_assignment({c, Objective::minimize});
  EXPECT_EQ(m.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}}));
  CostMatrix wide(2, 4, 0.0);
  EXPECT_EQ(solve_assignment({wide, Objective::maximize}).pairs,
            (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}}));
}

TEST(SolveAssignment, NonFiniteIsBadCost) {
  CostMatrix c(2, 2, 0.0);
  c(1, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    solve_assignment({c, Objective::minimize});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::bad_cost);
  }
  c(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve_assignment({c, Objective::minimize}), Error);
  EXPECT_THROW(solve_assignment({CostMatrix(0, 3), Objective::minimize}), Error);
}

TEST(SolveAssignment, EveryRowAndColumnUsedAtMostOnce) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto c = random_dyadic(rng, 1 + rng.below(6), 1 + rng.below(6));
    const auto m = solve_assignment({c, Objective::minimize});
    std::vector<int> rows(c.rows()), cols(c.cols());
    for (auto [r, k] : m.pairs) ++rows[r], ++cols[k];
    for (int x : rows) EXPECT_LE(x, 1);
    for (int x : cols) EXPECT_LE(x, 1);
    EXPECT_EQ(m.pairs.size(), std::min(c.rows(), c.cols()));
  }
}
