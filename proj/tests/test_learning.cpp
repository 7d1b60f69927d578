#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tripletkit/errors.hpp"
#include "tripletkit/learning.hpp"

using namespace tripletkit;

namespace {

KnnGraph graph_from_edges(std::size_t n, const std::vector<std::pair<ObjectId, ObjectId>>& edges) {
  KnnGraph g;
  g.n = n;
  g.adjacency.resize(n);
  for (auto [a, b] : edges) {
    g.adjacency[a].push_back({b, 1.0});
    g.adjacency[b].push_back({a, 1.0});
  }
  for (auto& adj : g.adjacency) {
    std::sort(adj.begin(), adj.end(), [](const WeightedEdge& x, const WeightedEdge& y) { return x.to < y.to; });
  }
  return g;
}

std::vector<std::pair<ObjectId, ObjectId>> two_cliques(const std::vector<ObjectId>& a, const std::vector<ObjectId>& b) {
  std::vector<std::pair<ObjectId, ObjectId>> e;
  for (const auto* part : {&a, &b}) {
    for (std::size_t i = 0; i < part->size(); ++i) {
      for (std::size_t j = i + 1; j < part->size(); ++j) e.emplace_back((*part)[i], (*part)[j]);
    }
  }
  return e;
}

// Same-cluster relation, invariant under relabelling of clusters.
std::vector<bool> co_membership(const std::vector<std::uint32_t>& c) {
  std::vector<bool> m;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) m.push_back(c[i] == c[j]);
  }
  return m;
}

}  // namespace

TEST(Split, DisjointCoverAndDeterministic) {
  std::vector<Label> labels(50);
  std::iota(labels.begin(), labels.end(), 100);
  auto s = make_split(labels, 0.7, 9);
  EXPECT_EQ(s.train.size(), 35u);
  EXPECT_EQ(s.test.size(), 15u);
  std::set<ObjectId> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 50u);
  for (std::size_t i = 0; i < s.train.size(); ++i) EXPECT_EQ(s.train_labels[i], labels[s.train[i]]);
  auto again = make_split(labels, 0.7, 9);
  EXPECT_EQ(again.train, s.train);
  EXPECT_NE(make_split(labels, 0.7, 10).train, s.train);
  EXPECT_THROW(make_split(labels, 1.0, 1), ParameterError);
  EXPECT_THROW(make_split(labels, 0.0, 1), ParameterError);
}

TEST(MajorityVote, TieGoesToEarliest) {
  std::vector<Label> label_of{0, 1, 1, 0, 2};
  EXPECT_EQ(majority_vote(std::vector<ObjectId>{1, 0, 3, 2}, label_of, 4), 1);
  EXPECT_EQ(majority_vote(std::vector<ObjectId>{0, 1, 2}, label_of, 3), 1);
  EXPECT_EQ(majority_vote(std::vector<ObjectId>{4, 0, 1}, label_of, 3), 2);
  EXPECT_EQ(majority_vote(std::vector<ObjectId>{4, 0, 1}, label_of, 10), 2);
  EXPECT_THROW(majority_vote(std::vector<ObjectId>{}, label_of, 1), ParameterError);
}

TEST(Classify, NearestTrainLabelWithKOne) {
  // Anchor 0 (test) ranks 2 before 1 before 3.
  auto family = build_graphs(TripletSet({{0, 2, 1}, {0, 1, 3}, {0, 2, 3}}, 4));
  LabeledSplit split;
  split.train = {1, 2, 3};
  split.train_labels = {7, 8, 7};
  split.test = {0};
  auto c = knn_classify(family, split, 1);
  ASSERT_TRUE(c.predictions[0].has_value());
  EXPECT_EQ(*c.predictions[0], 8);
  auto c3 = knn_classify(family, split, 3);
  EXPECT_EQ(*c3.predictions[0], 7);
}

TEST(Classify, UniformLabelsAndAbstention) {
  auto d = oracle::random_distances(20, 2, 3);
  auto family = build_graphs(TripletSet(oracle::sound_triplets(d, 0.3, 3), 20));
  std::vector<Label> labels(20, 4);
  auto split = make_split(labels, 0.7, 1);
  auto c = knn_classify(family, split, 3);
  EXPECT_EQ(c.abstentions, 0u);
  for (const auto& p : c.predictions) EXPECT_EQ(p, std::optional<Label>(4));
  EXPECT_DOUBLE_EQ(accuracy(split, c, labels), 100.0);

  auto empty = build_graphs(TripletSet({{0, 1, 2}}, 20));
  auto none = knn_classify(empty, split, 3);
  EXPECT_GT(none.abstentions, 0u);
  std::size_t informed = 0;
  for (const auto& p : none.predictions) informed += p.has_value() ? 1 : 0;
  EXPECT_EQ(informed + none.abstentions, split.test.size());
  if (informed == 0) EXPECT_THROW(accuracy(split, none, labels), UndefinedMetricError);
}

TEST(KMeans, SeparatedBlobs) {
  Eigen::MatrixXd pts(6, 1);
  pts << 0.0, 0.1, 0.2, 10.0, 10.1, 10.2;
  auto r = kmeans(pts, 2, 5, 3);
  EXPECT_EQ(r.assignment[0], r.assignment[2]);
  EXPECT_EQ(r.assignment[3], r.assignment[5]);
  EXPECT_NE(r.assignment[0], r.assignment[3]);
  EXPECT_NEAR(r.inertia, 4 * 0.01, 1e-9);
  EXPECT_THROW(kmeans(pts, 7, 1, 1), ParameterError);
  EXPECT_EQ(kmeans(pts, 2, 5, 3).assignment, r.assignment);
}

TEST(Spectral, TwoCliques) {
  auto g = graph_from_edges(8, two_cliques({0, 1, 2, 3}, {4, 5, 6, 7}));
  auto a = spectral_cluster(g, 2, 1);
  EXPECT_EQ(a.components, 2u);
  EXPECT_EQ(a.laplacian, "symmetric-normalized");
  std::vector<Label> truth{0, 0, 0, 0, 1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(purity(a.cluster, truth), 100.0);
  EXPECT_THROW(spectral_cluster(g, 1, 1), ParameterError);
}

TEST(Spectral, DiagnosticsForManyComponents) {
  auto g = graph_from_edges(7, {{0, 1}, {2, 3}, {4, 5}});
  auto a = spectral_cluster(g, 2, 1);
  EXPECT_EQ(a.components, 4u);
  EXPECT_EQ(a.diagnostics.size(), 2u);
  EXPECT_EQ(a.cluster.size(), 7u);
}

TEST(Spectral, PermutationEquivariant) {
  std::vector<ObjectId> a{0, 1, 2, 3, 4};
  std::vector<ObjectId> b{5, 6, 7, 8, 9};
  auto edges = two_cliques(a, b);
  edges.emplace_back(4, 5);
  std::vector<ObjectId> perm{3, 7, 0, 9, 5, 1, 8, 2, 6, 4};
  std::vector<std::pair<ObjectId, ObjectId>> permuted;
  for (auto [x, y] : edges) permuted.emplace_back(perm[x], perm[y]);
  auto base = spectral_cluster(graph_from_edges(10, edges), 2, 7).cluster;
  auto moved = spectral_cluster(graph_from_edges(10, permuted), 2, 7).cluster;
  std::vector<std::uint32_t> pulled(10);
  for (ObjectId v = 0; v < 10; ++v) pulled[v] = moved[perm[v]];
  EXPECT_EQ(co_membership(base), co_membership(pulled));
}

TEST(Spectral, Reproducible) {
  auto d = oracle::random_distances(30, 2, 8);
  auto family = build_graphs(TripletSet(oracle::sound_triplets(d, 0.2, 8), 30));
  auto g = build_knng(family, 4, true);
  EXPECT_EQ(spectral_cluster(g, 3, 11).cluster, spectral_cluster(g, 3, 11).cluster);
}

TEST(Purity, Examples) {
  std::vector<Label> labels{0, 1, 2, 0, 1, 2};
  EXPECT_DOUBLE_EQ(purity(std::vector<std::uint32_t>{0, 1, 2, 0, 1, 2}, labels), 100.0);
  std::vector<Label> two{0, 1, 0, 1};
  EXPECT_DOUBLE_EQ(purity(std::vector<std::uint32_t>{0, 0, 0, 0}, two), 50.0);
  EXPECT_THROW(purity(std::vector<std::uint32_t>{0}, two), ParameterError);
}

TEST(Purity, RandomAssignmentBaseline) {
  const std::size_t n = 30000;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint32_t> pick(0, 2);
  std::vector<std::uint32_t> a(n);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = pick(rng);
    labels[i] = static_cast<Label>(i % 3);
  }
  EXPECT_NEAR(purity(a, labels), 100.0 / 3.0, 1.5);
}
