#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace mapd;

namespace {

CostMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, int max_cost) {
  CostMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = static_cast<std::int64_t>(rng() % (max_cost + 1));
  return m;
}

void expect_injective(const Assignment& a, int cols) {
  std::set<int> seen;
  for (int c : a.col_of_row) {
    EXPECT_GE(c, 0);
    EXPECT_LT(c, cols);
    EXPECT_TRUE(seen.insert(c).second);
  }
}

}  // namespace

TEST(Hungarian, Trivial) {
  const auto one = hungarian(CostMatrix{{7}});
  EXPECT_EQ(one.col_of_row, (std::vector<int>{0}));
  EXPECT_EQ(one.cost, 7);
  const auto diag = hungarian(CostMatrix{{1, 2}, {2, 1}});
  EXPECT_EQ(diag.col_of_row, (std::vector<int>{0, 1}));
  EXPECT_EQ(diag.cost, 2);
  EXPECT_TRUE(hungarian(CostMatrix(0, 3)).col_of_row.empty());
}

TEST(Hungarian, AntiDiagonalAndRectangular) {
  EXPECT_EQ(hungarian(CostMatrix{{5, 1}, {1, 5}}).col_of_row, (std::vector<int>{1, 0}));
  const auto r = hungarian(CostMatrix{{9, 9, 1}, {9, 2, 1}});
  EXPECT_EQ(r.col_of_row, (std::vector<int>{2, 1}));
  EXPECT_EQ(r.cost, 3);
}

TEST(Hungarian, TiesResolveToLexicographicallySmallest) {
  EXPECT_EQ(hungarian(CostMatrix(2, 3, 4)).col_of_row, (std::vector<int>{0, 1}));
  EXPECT_EQ(hungarian(CostMatrix{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}).col_of_row, (std::vector<int>{0, 1, 2}));
  // Two optima of cost 2: {0->0,1->1} and {0->1,1->0}.
  EXPECT_EQ(hungarian(CostMatrix{{1, 1}, {1, 1}}).col_of_row, (std::vector<int>{0, 1}));
}

TEST(Hungarian, MatchesPermutationOracle) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 400; ++i) {
    const int rows = 1 + static_cast<int>(rng() % 7);
    const int cols = rows + static_cast<int>(rng() % (8 - rows));
    const int max_cost = i % 2 ? 3 : 1000;  // small ranges force many ties
    const CostMatrix m = random_matrix(rng, rows, cols, max_cost);
    const auto a = hungarian(m);
    ASSERT_EQ(static_cast<int>(a.col_of_row.size()), rows);
    expect_injective(a, cols);
    EXPECT_EQ(a.cost, oracle::min_assignment(m)) << "case " << i;
  }
}

TEST(Hungarian, ScalingKeepsTheMatching) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const int rows = 1 + static_cast<int>(rng() % 6);
    const int cols = rows + static_cast<int>(rng() % 3);
    const CostMatrix m = random_matrix(rng, rows, cols, 20);
    CostMatrix scaled = m;
    const int k = 2 + static_cast<int>(rng() % 9);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) scaled(r, c) *= k;
    EXPECT_EQ(hungarian(m).col_of_row, hungarian(scaled).col_of_row);
  }
}

TEST(Hungarian, Errors) {
  EXPECT_THROW(hungarian(CostMatrix(3, 2)), ConfigError);
  EXPECT_THROW(hungarian(CostMatrix{{-1}}), ConfigError);
  EXPECT_THROW(hungarian(CostMatrix{{std::int64_t{1} << 60}}), ConfigError);
  EXPECT_THROW((CostMatrix{{1, 2}, {3}}), ConfigError);
  EXPECT_THROW(CostMatrix(-1, 2), ConfigError);
}

TEST(ModifiedCosts, Examples) {
  const auto single = modified_costs({{0}}, {EndpointKind::kPickup});
  EXPECT_EQ(single(0, 0), 0);
  // Two free agents, largest base cost 4, so C = 5.
  const auto m = modified_costs({{3, 3}, {4, 0}}, {EndpointKind::kPickup, EndpointKind::kParking});
  EXPECT_EQ(m(0, 0), 30);
  EXPECT_EQ(m(0, 1), 53);
  EXPECT_EQ(m(1, 0), 40);
  EXPECT_EQ(m(1, 1), 50);
}

TEST(ModifiedCosts, PickupDominatesParking) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const int rows = 1 + static_cast<int>(rng() % 5);
    const int cols = 1 + static_cast<int>(rng() % 8);
    std::vector<std::vector<int>> base(rows, std::vector<int>(cols));
    std::vector<EndpointKind> kinds(cols);
    int max_base = 0;
    for (int c = 0; c < cols; ++c) kinds[c] = rng() % 2 ? EndpointKind::kPickup : EndpointKind::kParking;
    for (auto& row : base)
      for (int& x : row) max_base = std::max(max_base, x = static_cast<int>(rng() % 30));
    const auto m = modified_costs(base, kinds);
    const std::int64_t c = rows;
    const std::int64_t big_c = max_base + 1;
    std::int64_t max_pickup = -1;
    std::int64_t min_parking = std::numeric_limits<std::int64_t>::max();
    for (int r = 0; r < rows; ++r)
      for (int k = 0; k < cols; ++k) {
        if (kinds[k] == EndpointKind::kPickup) max_pickup = std::max(max_pickup, m(r, k));
        else min_parking = std::min(min_parking, m(r, k));
      }
    EXPECT_LE(max_pickup, c * big_c * (big_c - 1));
    EXPECT_LT(max_pickup, min_parking);
    EXPECT_GE(min_parking, c * big_c * big_c);
  }
}

TEST(ModifiedCosts, MatchingNeverParksWhileAPickupIsLeft) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const int rows = 1 + static_cast<int>(rng() % 5);
    const int pickups = static_cast<int>(rng() % 5);
    const int cols = std::max(rows, pickups) + static_cast<int>(rng() % 3);
    std::vector<EndpointKind> kinds(cols, EndpointKind::kParking);
    for (int k = 0; k < pickups; ++k) kinds[k] = EndpointKind::kPickup;
    std::vector<std::vector<int>> base(rows, std::vector<int>(cols));
    for (auto& row : base)
      for (int& x : row) x = static_cast<int>(rng() % 25);
    const auto a = hungarian(modified_costs(base, kinds));
    std::set<int> used(a.col_of_row.begin(), a.col_of_row.end());
    bool parked = false;
    for (int col : a.col_of_row) parked = parked || kinds[col] == EndpointKind::kParking;
    bool pickup_left = false;
    for (int k = 0; k < pickups; ++k) pickup_left = pickup_left || !used.count(k);
    EXPECT_FALSE(parked && pickup_left) << "case " << i;
    // Among pickup assignments the total pickup distance is minimal.
    if (pickups >= rows) {
      CostMatrix only(rows, pickups);
      for (int r = 0; r < rows; ++r)
        for (int k = 0; k < pickups; ++k) only(r, k) = base[r][k];
      std::int64_t got = 0;
      for (int r = 0; r < rows; ++r) got += base[r][a.col_of_row[r]];
      EXPECT_EQ(got, oracle::min_assignment(only));
    }
  }
}

TEST(ModifiedCosts, UnreachableEntriesAreAvoided) {
  const auto m = modified_costs({{kInfinity, 9}, {1, kInfinity}}, {EndpointKind::kPickup, EndpointKind::kParking});
  const auto a = hungarian(m);
  EXPECT_EQ(a.col_of_row, (std::vector<int>{1, 0}));
  EXPECT_GT(m(0, 0), m(0, 1) + m(1, 0));
}

TEST(ModifiedCosts, Errors) {
  EXPECT_THROW(modified_costs({{1, 2}}, {EndpointKind::kPickup}), ConfigError);
  EXPECT_THROW(modified_costs({{-1}}, {EndpointKind::kPickup}), ConfigError);
  EXPECT_THROW(modified_costs({{1 << 28}, {1}}, {EndpointKind::kPickup}), ConfigError);
}
