#include "tripletkit/kernel.hpp"

#include <algorithm>
#include <ostream>
#include <utility>

#include "tripletkit/parallel.hpp"

namespace tripletkit {

namespace {

// Sorts (key, value) contributions, sums repeats and drops zeros.
FeatureVector compact(ObjectId owner, std::size_t n,
                      std::vector<std::pair<PairKey, int>>& entries) {
  std::sort(entries.begin(), entries.end());
  FeatureVector fv;
  fv.owner = owner;
  fv.n = n;
  fv.keys.reserve(entries.size());
  fv.values.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size();) {
    auto key = entries[i].first;
    int sum = 0;
    for (; i < entries.size() && entries[i].first == key; ++i) sum += entries[i].second;
    // A triplet and its contradiction cancel.
    if (sum == 0) continue;
    fv.keys.push_back(key);
    fv.values.push_back(static_cast<std::int8_t>(sum > 0 ? 1 : -1));
  }
  return fv;
}

}  // namespace

int FeatureVector::at(ObjectId i, ObjectId j) const {
  auto key = pair_key(i, j, n);
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) return 0;
  return values[static_cast<std::size_t>(it - keys.begin())];
}

FeatureVector phi1(const AnchorDagFamily& family, ObjectId x) {
  const auto& g = family.graphs[x];
  std::vector<std::pair<PairKey, int>> entries;
  entries.reserve(g.edge_count());
  for (ObjectId y = 0; y < g.n(); ++y) {
    for (ObjectId z : g.out_neighbors(y)) {
      if (y < z) {
        entries.emplace_back(pair_key(y, z, family.n), 1);
      } else {
        entries.emplace_back(pair_key(z, y, family.n), -1);
      }
    }
  }
  return compact(x, family.n, entries);
}

std::vector<FeatureVector> phi1_all(const AnchorDagFamily& family) {
  std::vector<FeatureVector> out(family.n);
  parallel_for(family.n, [&](std::size_t i) { out[i] = phi1(family, static_cast<ObjectId>(i)); });
  return out;
}

namespace {

// Contributions of one triplet (a, y, z) to Phi2 of y and of z.
template <typename Sink>
void phi2_contributions(const Triplet& t, std::size_t n, Sink&& sink) {
  if (t.anchor < t.far) sink(t.near, pair_key(t.anchor, t.far, n), 1);
  if (t.anchor < t.near) sink(t.far, pair_key(t.anchor, t.near, n), -1);
}

}  // namespace

FeatureVector phi2(const TripletSet& ts, ObjectId x) {
  std::vector<std::pair<PairKey, int>> entries;
  for (const auto& t : ts) {
    phi2_contributions(t, ts.n(), [&](ObjectId owner, PairKey key, int v) {
      if (owner == x) entries.emplace_back(key, v);
    });
  }
  return compact(x, ts.n(), entries);
}

std::vector<FeatureVector> phi2_all(const TripletSet& ts) {
  const auto n = ts.n();
  std::vector<std::vector<std::pair<PairKey, int>>> entries(n);
  for (const auto& t : ts) {
    phi2_contributions(t, n, [&](ObjectId owner, PairKey key, int v) {
      entries[owner].emplace_back(key, v);
    });
  }
  std::vector<FeatureVector> out(n);
  for (ObjectId x = 0; x < n; ++x) out[x] = compact(x, n, entries[x]);
  return out;
}

std::int64_t kernel_value(const FeatureVector& a, const FeatureVector& b) {
  std::int64_t sum = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto na = a.keys.size();
  const auto nb = b.keys.size();
  while (i < na && j < nb) {
    const auto ka = a.keys[i];
    const auto kb = b.keys[j];
    if (ka < kb) {
      ++i;
    } else if (kb < ka) {
      ++j;
    } else {
      sum += a.values[i] * b.values[j];
      ++i;
      ++j;
    }
  }
  return sum;
}

KernelMatrix kernel_matrix(const std::vector<FeatureVector>& features, bool from_augmented) {
  const auto n = features.size();
  KernelMatrix k(n, from_augmented);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) k(i, j) = kernel_value(features[i], features[j]);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) k(i, j) = k(j, i);
  }
  return k;
}

KernelMatrix kernel_matrix(const AnchorDagFamily& family, bool from_augmented) {
  return kernel_matrix(phi1_all(family), from_augmented);
}

void write_kernel_csv(std::ostream& out, const KernelMatrix& k) {
  for (std::size_t i = 0; i < k.n(); ++i) {
    for (std::size_t j = 0; j < k.n(); ++j) {
      if (j) out << ',';
      out << k(i, j);
    }
    out << '\n';
  }
}

}  // namespace tripletkit
