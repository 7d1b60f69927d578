#include "tripletkit/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tripletkit/errors.hpp"
#include "tripletkit/parallel.hpp"

namespace tripletkit {

RankMatrix rank_rows(const KernelMatrix& k) {
  const auto n = k.n();
  RankMatrix h(n);
  parallel_for(n, [&](std::size_t x) {
    std::vector<std::uint32_t> order;
    order.reserve(n);
    for (std::uint32_t y = 0; y < n; ++y) {
      if (y != x) order.push_back(y);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return k(x, a) > k(x, b); });
    for (std::size_t r = 0; r < order.size(); ++r) h(x, order[r]) = static_cast<std::uint32_t>(r + 1);
    h(x, x) = 0;
  });
  return h;
}

CentralityVector centrality(const RankMatrix& h, double p) {
  if (!(p >= 1.0 && p <= 3.0)) {
    throw ParameterError("norm order p must lie in [1, 3], got " + std::to_string(p));
  }
  const auto n = h.n();
  CentralityVector c;
  c.p = p;
  c.values.assign(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double acc = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      double r = h(y, x);
      acc += p == 1.0 ? r : std::pow(r, p);
    }
    c.values[x] = p == 1.0 ? acc : std::pow(acc, 1.0 / p);
  }
  return c;
}

CentralityVector centrality(const KernelMatrix& k, double p) {
  if (!(p >= 1.0 && p <= 3.0)) {
    throw ParameterError("norm order p must lie in [1, 3], got " + std::to_string(p));
  }
  return centrality(rank_rows(k), p);
}

std::vector<double> kernel_row_sums(const KernelMatrix& k) {
  std::vector<double> out(k.n(), 0.0);
  for (std::size_t x = 0; x < k.n(); ++x) {
    for (std::size_t y = 0; y < k.n(); ++y) {
      if (y != x) out[x] += static_cast<double>(k(x, y));
    }
  }
  return out;
}

ObjectId median(const CentralityVector& c) {
  if (c.values.empty()) throw ParameterError("median of an empty centrality vector");
  auto it = std::min_element(c.values.begin(), c.values.end());
  return static_cast<ObjectId>(it - c.values.begin());
}

ClosenessBounds closeness_bounds(const AnchorDagFamily& family, ObjectId x, ObjectId y) {
  if (x == y) throw ParameterError("closeness of an object to itself is undefined");
  const auto& g = family.graphs[x];
  return {g.in_degree(y), static_cast<std::uint32_t>(family.n - g.out_degree(y))};
}

double approx_closeness(const AnchorDagFamily& family, ObjectId x, ObjectId y) {
  return closeness_bounds(family, x, y).midpoint();
}

std::vector<ObjectId> rank_by_closeness(const AnchorDagFamily& family, ObjectId x,
                                        std::span<const ObjectId> candidates) {
  const auto& g = family.graphs[x];
  const auto n = static_cast<std::uint32_t>(family.n);
  // Twice close', kept integral so ordering is exact.
  std::vector<std::pair<std::uint32_t, ObjectId>> keyed;
  keyed.reserve(candidates.size());
  for (ObjectId y : candidates) {
    if (y == x) continue;
    keyed.emplace_back(g.in_degree(y) + n - g.out_degree(y), y);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<ObjectId> out;
  out.reserve(keyed.size());
  for (const auto& [key, y] : keyed) out.push_back(y);
  return out;
}

std::vector<ObjectId> approx_knn(const AnchorDagFamily& family, ObjectId x, std::size_t k) {
  const auto n = family.n;
  if (k < 1 || k >= n) {
    throw ParameterError("k must satisfy 1 <= k < n (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ")");
  }
  const auto& g = family.graphs[x];
  std::vector<std::pair<std::uint32_t, ObjectId>> keyed;
  keyed.reserve(n - 1);
  for (ObjectId y = 0; y < n; ++y) {
    if (y == x) continue;
    keyed.emplace_back(g.in_degree(y) + static_cast<std::uint32_t>(n) - g.out_degree(y), y);
  }
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end());
  std::vector<ObjectId> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(keyed[i].second);
  return out;
}

std::vector<double> KnnGraph::dense_weights() const {
  std::vector<double> w(n * n, 0.0);
  for (ObjectId v = 0; v < n; ++v) {
    for (const auto& e : adjacency[v]) w[v * n + e.to] = e.weight;
  }
  return w;
}

KnnGraph build_knng(const AnchorDagFamily& family, std::size_t k, bool weighted) {
  const auto n = family.n;
  std::vector<std::vector<ObjectId>> neighbours(n);
  parallel_for(n, [&](std::size_t x) { neighbours[x] = approx_knn(family, static_cast<ObjectId>(x), k); });

  // Directed weights merged by max into an undirected graph.
  std::vector<std::vector<WeightedEdge>> directed(n);
  for (ObjectId x = 0; x < n; ++x) {
    for (ObjectId y : neighbours[x]) {
      double w = weighted ? 1.0 / approx_closeness(family, x, y) : 1.0;
      directed[x].push_back({y, w});
      directed[y].push_back({x, w});
    }
  }
  KnnGraph graph;
  graph.n = n;
  graph.weighted = weighted;
  graph.adjacency.resize(n);
  for (ObjectId v = 0; v < n; ++v) {
    auto& edges = directed[v];
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
      return a.to != b.to ? a.to < b.to : a.weight > b.weight;
    });
    for (const auto& e : edges) {
      if (graph.adjacency[v].empty() || graph.adjacency[v].back().to != e.to) {
        graph.adjacency[v].push_back(e);
      }
    }
  }
  return graph;
}

}  // namespace tripletkit
