#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"
#include "tripletkit/analytics.hpp"
#include "tripletkit/augmentation.hpp"
#include "tripletkit/errors.hpp"

using namespace tripletkit;

namespace {

KernelMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  KernelMatrix k(rows.size(), false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) k(i, j) = rows[i][j];
  }
  return k;
}

}  // namespace

TEST(RankRows, CountingOracle) {
  auto raw = oracle::arbitrary_triplets(11, 120, 2);
  auto k = kernel_matrix(build_graphs(TripletSet(raw, 11)));
  auto h = rank_rows(k);
  for (std::size_t x = 0; x < 11; ++x) {
    EXPECT_EQ(h(x, x), 0u);
    std::set<std::uint32_t> seen;
    for (std::size_t y = 0; y < 11; ++y) {
      if (y == x) continue;
      std::uint32_t r = 1;
      for (std::size_t z = 0; z < 11; ++z) {
        if (z == x || z == y) continue;
        if (k(x, z) > k(x, y) || (k(x, z) == k(x, y) && z < y)) ++r;
      }
      EXPECT_EQ(h(x, y), r);
      seen.insert(h(x, y));
    }
    EXPECT_EQ(seen.size(), 10u);
    EXPECT_EQ(*seen.rbegin(), 10u);
  }
}

TEST(RankRows, AllEqualRowUsesIdOrder) {
  auto h = rank_rows(from_rows({{5, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}}));
  EXPECT_EQ(h(0, 1), 1u);
  EXPECT_EQ(h(0, 2), 2u);
  EXPECT_EQ(h(0, 3), 3u);
}

TEST(Centrality, NormsOfRankColumns) {
  auto k = from_rows({{0, 3, 1}, {3, 0, 2}, {1, 2, 0}});
  // Ranks: row 0 -> (1:1, 2:2), row 1 -> (0:1, 2:2), row 2 -> (1:1, 0:2).
  auto c1 = centrality(k, 1.0);
  EXPECT_EQ(c1.values, (std::vector<double>{3.0, 2.0, 4.0}));
  EXPECT_EQ(median(c1), 1u);
  auto c2 = centrality(k, 2.0);
  EXPECT_NEAR(c2.values[0], std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(c2.values[2], std::sqrt(8.0), 1e-12);
  EXPECT_THROW(centrality(k, 0.5), ParameterError);
  EXPECT_THROW(centrality(k, 3.5), ParameterError);
}

TEST(Median, ArgminAndTies) {
  EXPECT_EQ(median(CentralityVector{{5, 2, 9}, 1.0}), 1u);
  EXPECT_EQ(median(CentralityVector{{4, 4, 4}, 1.0}), 0u);
  EXPECT_THROW(median(CentralityVector{}), ParameterError);
  CentralityVector c{{3.0, 0.5, 7.0, 0.5}, 1.0};
  CentralityVector cubed = c;
  for (auto& v : cubed.values) v = std::exp(v * v * v);
  EXPECT_EQ(median(c), median(cubed));
}

TEST(KernelRowSums, Diagnostic) {
  auto s = kernel_row_sums(from_rows({{9, 1, -2}, {1, 9, 4}, {-2, 4, 9}}));
  EXPECT_EQ(s, (std::vector<double>{-1.0, 5.0, 2.0}));
}

TEST(Closeness, EmptyAndWorked) {
  auto family = build_graphs(TripletSet({{0, 1, 2}}, 3));
  auto b = closeness_bounds(family, 1, 0);
  EXPECT_EQ(b.lower, 0u);
  EXPECT_EQ(b.upper, 3u);
  EXPECT_DOUBLE_EQ(b.midpoint(), 1.5);
  EXPECT_EQ(approx_knn(family, 0, 1), (std::vector<ObjectId>{1}));
  EXPECT_THROW(closeness_bounds(family, 1, 1), ParameterError);
  EXPECT_THROW(approx_knn(family, 0, 3), ParameterError);
  EXPECT_THROW(approx_knn(family, 0, 0), ParameterError);
  EXPECT_DOUBLE_EQ((ClosenessBounds{3, 5}).midpoint(), 4.0);
}

TEST(Closeness, ClosedChainDegrees) {
  // Closed chain 1 -> 2 -> 3 -> 4 at anchor 0: vertex 4 is farthest.
  auto ts = augment(TripletSet({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 1, 3}}, 8)).augmented;
  auto family = build_graphs(ts);
  auto b = closeness_bounds(family, 0, 4);
  EXPECT_EQ(b.lower, 3u);
  EXPECT_EQ(b.upper, 8u);
  auto b1 = closeness_bounds(family, 0, 1);
  EXPECT_EQ(b1.lower, 0u);
  EXPECT_EQ(b1.upper, 5u);
}

TEST(Closeness, SandwichOnSoundData) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 20;
    auto d = oracle::random_distances(n, 2, seed);
    TripletSet ts(oracle::sound_triplets(d, 0.3, seed), n);
    auto raw = build_graphs(ts);
    auto closed = build_graphs(augment(ts).augmented);
    for (ObjectId x = 0; x < n; ++x) {
      for (ObjectId y = 0; y < n; ++y) {
        if (x == y) continue;
        const auto r = oracle::true_rank(d, x, y);
        auto b = closeness_bounds(raw, x, y);
        auto c = closeness_bounds(closed, x, y);
        EXPECT_LE(b.lower, r);
        EXPECT_LE(r, b.upper);
        EXPECT_LE(c.lower, r);
        EXPECT_LE(r, c.upper);
        EXPECT_GE(c.lower, b.lower);
        EXPECT_LE(c.upper, b.upper);
      }
    }
  }
}

TEST(ApproxKnn, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 3 + seed % 10;
    auto raw = oracle::arbitrary_triplets(n, 1 + (seed * 5) % 150, seed);
    auto family = build_graphs(TripletSet(raw, n));
    for (ObjectId x = 0; x < n; ++x) {
      for (std::size_t k = 1; k < n; ++k) ASSERT_EQ(approx_knn(family, x, k), oracle::knn(raw, n, x, k));
    }
  }
}

TEST(ApproxKnn, RankByClosenessRestricted) {
  auto family = build_graphs(TripletSet({{0, 3, 1}, {0, 3, 2}, {0, 1, 2}}, 5));
  std::vector<ObjectId> cands{2, 1, 0, 3};
  EXPECT_EQ(rank_by_closeness(family, 0, cands), (std::vector<ObjectId>{3, 1, 2}));
}

TEST(Knng, CompleteWhenKIsNMinusOne) {
  auto raw = oracle::arbitrary_triplets(7, 40, 4);
  auto g = build_knng(build_graphs(TripletSet(raw, 7)), 6, false);
  for (ObjectId v = 0; v < 7; ++v) EXPECT_EQ(g.degree(v), 6u);
}

TEST(Knng, MatchesOracle) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 6 + seed % 6;
    const std::size_t k = 1 + seed % 3;
    auto raw = oracle::arbitrary_triplets(n, 10 + seed * 4, seed);
    auto family = build_graphs(TripletSet(raw, n));
    std::map<std::pair<ObjectId, ObjectId>, double> expected;
    for (ObjectId x = 0; x < n; ++x) {
      for (ObjectId y : oracle::knn(raw, n, x, k)) {
        const double w = 2.0 / oracle::twice_closeness(raw, n, x, y);
        for (auto key : {std::pair{x, y}, std::pair{y, x}}) {
          auto it = expected.find(key);
          expected[key] = it == expected.end() ? w : std::max(it->second, w);
        }
      }
    }
    auto g = build_knng(family, k, true);
    auto u = build_knng(family, k, false);
    std::map<std::pair<ObjectId, ObjectId>, double> got;
    for (ObjectId v = 0; v < n; ++v) {
      EXPECT_GE(u.degree(v), k);
      EXPECT_EQ(u.degree(v), g.degree(v));
      for (const auto& e : g.adjacency[v]) got[{v, e.to}] = e.weight;
      for (const auto& e : u.adjacency[v]) EXPECT_EQ(e.weight, 1.0);
    }
    ASSERT_EQ(got.size(), expected.size());
    for (const auto& [key, w] : expected) EXPECT_DOUBLE_EQ(got[key], w);
    auto dense = g.dense_weights();
    for (ObjectId a = 0; a < n; ++a) {
      for (ObjectId b = 0; b < n; ++b) EXPECT_EQ(dense[a * n + b], dense[b * n + a]);
    }
  }
}
