#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "tripletkit/augmentation.hpp"
#include "tripletkit/kernel.hpp"

using namespace tripletkit;

namespace {

// Phi2 straight from its coordinate definition over every pair i < j.
std::vector<int> dense_phi2(const TripletSet& ts, std::size_t n, ObjectId x) {
  std::vector<int> v(n * n, 0);
  for (ObjectId i = 0; i < n; ++i) {
    for (ObjectId j = i + 1; j < n; ++j) {
      if (i == x || j == x) continue;
      if (ts.contains({i, x, j})) v[i * n + j] += 1;
      if (ts.contains({i, j, x})) v[i * n + j] -= 1;
    }
  }
  return v;
}

std::vector<int> densify(const FeatureVector& f) {
  std::vector<int> v(f.n * f.n, 0);
  for (std::size_t i = 0; i < f.keys.size(); ++i) v[f.keys[i]] = f.values[i];
  return v;
}

}  // namespace

TEST(Phi1, SignsFollowIdOrder) {
  auto family = build_graphs(TripletSet({{0, 1, 2}, {0, 3, 2}}, 4));
  auto f = phi1(family, 0);
  EXPECT_EQ(f.at(1, 2), 1);
  EXPECT_EQ(f.at(2, 3), -1);
  EXPECT_EQ(f.at(1, 3), 0);
  EXPECT_EQ(f.nonzeros(), 2u);
}

TEST(Phi1, ContradictionCancels) {
  auto family = build_graphs(TripletSet({{0, 1, 2}, {0, 2, 1}}, 3));
  EXPECT_EQ(phi1(family, 0).nonzeros(), 0u);
}

TEST(Phi1, MatchesDenseOracle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 3 + seed % 9;
    auto raw = oracle::arbitrary_triplets(n, 1 + seed * 3, seed);
    auto family = build_graphs(TripletSet(raw, n));
    for (ObjectId x = 0; x < n; ++x) ASSERT_EQ(densify(phi1(family, x)), oracle::dense_phi1(raw, n, x));
  }
}

TEST(Phi2, MatchesDefinition) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 3 + seed % 9;
    TripletSet ts(oracle::arbitrary_triplets(n, 1 + seed * 3, seed + 7), n);
    auto all = phi2_all(ts);
    for (ObjectId x = 0; x < n; ++x) {
      ASSERT_EQ(densify(phi2(ts, x)), dense_phi2(ts, n, x));
      ASSERT_EQ(densify(all[x]), dense_phi2(ts, n, x));
    }
  }
}

TEST(Kernel, MatchesDenseProduct) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 3 + seed % 13;
    auto raw = oracle::arbitrary_triplets(n, 1 + (seed * 7) % 200, seed);
    auto k = kernel_matrix(build_graphs(TripletSet(raw, n)));
    ASSERT_EQ(k.values(), oracle::dense_kernel(raw, n)) << "seed " << seed;
  }
}

TEST(Kernel, Properties) {
  auto d = oracle::random_distances(14, 2, 21);
  TripletSet ts(oracle::sound_triplets(d, 0.3, 2), 14);
  auto family = build_graphs(ts);
  auto k = kernel_matrix(family);
  for (ObjectId x = 0; x < 14; ++x) {
    EXPECT_EQ(k(x, x), static_cast<std::int64_t>(family[x].edge_count()));
    for (ObjectId y = 0; y < 14; ++y) {
      EXPECT_EQ(k(x, y), k(y, x));
      EXPECT_LE(std::abs(k(x, y)),
                static_cast<std::int64_t>(std::min(family[x].edge_count(), family[y].edge_count())));
    }
  }
  auto closed = build_graphs(augment(ts).augmented);
  for (ObjectId x = 0; x < 14; ++x) EXPECT_GE(phi1(closed, x).nonzeros(), phi1(family, x).nonzeros());
}

TEST(Kernel, ValueIsAgreeMinusDisagree) {
  auto family = build_graphs(TripletSet({{0, 1, 2}, {0, 1, 3}, {1, 0, 2}, {1, 3, 0}}, 4));
  // Anchor 0 says 1<2 and 1<3, anchor 1 says 0<2 and 3<0; no shared pair.
  EXPECT_EQ(kernel_value(phi1(family, 0), phi1(family, 1)), 0);
  auto g2 = build_graphs(TripletSet({{0, 1, 2}, {0, 1, 3}, {2, 1, 3}, {2, 3, 0}}, 4));
  // Anchor 0: 1<2, 1<3. Anchor 2: 1<3, 3<0. One agreement.
  EXPECT_EQ(kernel_value(phi1(g2, 0), phi1(g2, 2)), 1);
}

TEST(Kernel, Csv) {
  auto k = kernel_matrix(build_graphs(TripletSet({{0, 1, 2}}, 3)));
  std::ostringstream out;
  write_kernel_csv(out, k);
  EXPECT_EQ(out.str(), "1,0,0\n0,0,0\n0,0,0\n");
}
