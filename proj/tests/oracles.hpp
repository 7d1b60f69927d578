#pragma once

// Slow, direct reference computations used as test oracles. Nothing here
// calls into the library algorithms it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tripletkit/triplets.hpp"

namespace oracle {

using tripletkit::ObjectId;
using tripletkit::Triplet;

/// Random point cloud as an n x n Euclidean distance table.
inline std::vector<std::vector<double>> random_distances(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto& p : pts) {
    for (auto& c : p) c = g(rng);
  }
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
      d[i][j] = std::sqrt(s);
    }
  }
  return d;
}

/// Every anchored comparison of a distance table, kept with probability `keep`.
inline std::vector<Triplet> sound_triplets(const std::vector<std::vector<double>>& d, double keep,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution take(keep);
  const auto n = static_cast<ObjectId>(d.size());
  std::vector<Triplet> out;
  for (ObjectId x = 0; x < n; ++x) {
    for (ObjectId y = 0; y < n; ++y) {
      for (ObjectId z = y + 1; z < n; ++z) {
        if (y == x || z == x || !take(rng)) continue;
        if (d[x][y] < d[x][z]) out.push_back({x, y, z});
        if (d[x][z] < d[x][y]) out.push_back({x, z, y});
      }
    }
  }
  return out;
}

/// Uniformly random triplets with no consistency guarantee (cycles likely).
inline std::vector<Triplet> arbitrary_triplets(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<ObjectId> id(0, static_cast<ObjectId>(n - 1));
  std::vector<Triplet> out;
  while (out.size() < count) {
    Triplet t{id(rng), id(rng), id(rng)};
    if (t.anchor == t.near || t.anchor == t.far || t.near == t.far) continue;
    out.push_back(t);
  }
  return out;
}

inline std::vector<Triplet> unique_sorted(std::vector<Triplet> ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

/// Dense Phi1 of anchor x over n*n coordinates: (x, a, b) adds +1 at (a, b)
/// when a < b and -1 at (b, a) otherwise.
inline std::vector<int> dense_phi1(const std::vector<Triplet>& ts, std::size_t n, ObjectId x) {
  std::vector<int> v(n * n, 0);
  for (const auto& t : unique_sorted(ts)) {
    if (t.anchor != x) continue;
    if (t.near < t.far) {
      v[t.near * n + t.far] += 1;
    } else {
      v[t.far * n + t.near] -= 1;
    }
  }
  return v;
}

/// Dense kernel via full feature-matrix product.
inline std::vector<std::int64_t> dense_kernel(const std::vector<Triplet>& ts, std::size_t n) {
  std::vector<std::vector<int>> phi;
  for (ObjectId x = 0; x < n; ++x) phi.push_back(dense_phi1(ts, n, x));
  std::vector<std::int64_t> k(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::int64_t s = 0;
      for (std::size_t c = 0; c < n * n; ++c) s += phi[a][c] * phi[b][c];
      k[a * n + b] = s;
    }
  }
  return k;
}

/// Warshall closure of one anchor's edges; returns reach[u][v] for u != v.
inline std::vector<std::vector<bool>> boolean_closure(const std::vector<Triplet>& ts, std::size_t n, ObjectId x) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (const auto& t : ts) {
    if (t.anchor == x) r[t.near][t.far] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (r[k][j]) r[i][j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) r[i][i] = false;
  return r;
}

/// Closure of every anchor graph, as a sorted triplet list.
inline std::vector<Triplet> closure_triplets(const std::vector<Triplet>& ts, std::size_t n) {
  std::vector<Triplet> out;
  for (ObjectId x = 0; x < n; ++x) {
    auto r = boolean_closure(ts, n, x);
    for (ObjectId u = 0; u < n; ++u) {
      for (ObjectId v = 0; v < n; ++v) {
        if (r[u][v]) out.push_back({x, u, v});
      }
    }
  }
  return out;
}

/// Twice the approximate closeness of y to x, counted by scanning triplets.
inline std::uint32_t twice_closeness(const std::vector<Triplet>& ts, std::size_t n, ObjectId x, ObjectId y) {
  std::uint32_t nearer = 0;
  std::uint32_t farther = 0;
  for (const auto& t : unique_sorted(ts)) {
    if (t.anchor != x) continue;
    if (t.far == y) ++nearer;
    if (t.near == y) ++farther;
  }
  return nearer + static_cast<std::uint32_t>(n) - farther;
}

/// k objects of smallest closeness, ties to the lower id, by full sort.
inline std::vector<ObjectId> knn(const std::vector<Triplet>& ts, std::size_t n, ObjectId x, std::size_t k) {
  std::vector<std::pair<std::uint32_t, ObjectId>> all;
  for (ObjectId y = 0; y < n; ++y) {
    if (y != x) all.emplace_back(twice_closeness(ts, n, x, y), y);
  }
  std::sort(all.begin(), all.end());
  std::vector<ObjectId> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].second);
  return out;
}

/// True rank of y among objects ordered by distance from x (1 = nearest).
inline std::uint32_t true_rank(const std::vector<std::vector<double>>& d, ObjectId x, ObjectId y) {
  std::uint32_t r = 1;
  for (std::size_t z = 0; z < d.size(); ++z) {
    if (z != x && z != y && d[x][z] < d[x][y]) ++r;
  }
  return r;
}

}  // namespace oracle
