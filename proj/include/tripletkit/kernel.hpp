#pragma once

// Sparse triplet feature maps and the triplet kernel.
//
// Coordinates are unordered object pairs (i, j), i < j, keyed as i * n + j.
// Phi1(x) is +1 at (i, j) when the anchor graph of x has edge i -> j and -1
// when it has j -> i. Phi2(x) is +1 at (i, j) when (i, x, j) is a triplet
// and -1 when (i, j, x) is. K(x, y) = <Phi(x), Phi(y)>, an exact integer.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tripletkit/anchor_graphs.hpp"
#include "tripletkit/triplets.hpp"

namespace tripletkit {

using PairKey = std::uint64_t;

inline PairKey pair_key(ObjectId i, ObjectId j, std::size_t n) {
  return static_cast<PairKey>(i) * n + j;
}

/// Sparse {-1, +1} vector; keys strictly increasing, zeros never stored.
struct FeatureVector {
  ObjectId owner = 0;
  std::size_t n = 0;
  std::vector<PairKey> keys;
  std::vector<std::int8_t> values;

  std::size_t nonzeros() const noexcept { return keys.size(); }
  /// Value at coordinate (i, j), i < j.
  int at(ObjectId i, ObjectId j) const;
};

FeatureVector phi1(const AnchorDagFamily& family, ObjectId x);
FeatureVector phi2(const TripletSet& ts, ObjectId x);

/// Phi1 / Phi2 of every object.
std::vector<FeatureVector> phi1_all(const AnchorDagFamily& family);
std::vector<FeatureVector> phi2_all(const TripletSet& ts);

/// Dot product by linear merge over the stored coordinates.
std::int64_t kernel_value(const FeatureVector& a, const FeatureVector& b);

/// Dense row-major n x n symmetric integer matrix.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  KernelMatrix(std::size_t n, bool from_augmented)
      : n_(n), from_augmented_(from_augmented), values_(n * n, 0) {}

  std::size_t n() const noexcept { return n_; }
  bool from_augmented() const noexcept { return from_augmented_; }

  std::int64_t operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

  const std::vector<std::int64_t>& values() const noexcept { return values_; }

  friend bool operator==(const KernelMatrix&, const KernelMatrix&) = default;

 private:
  std::size_t n_ = 0;
  bool from_augmented_ = false;
  std::vector<std::int64_t> values_;
};

/// Gram matrix of the given feature vectors; rows computed in parallel.
KernelMatrix kernel_matrix(const std::vector<FeatureVector>& features, bool from_augmented = false);

/// K1 of a family of anchor graphs.
KernelMatrix kernel_matrix(const AnchorDagFamily& family, bool from_augmented = false);

/// CSV: n lines of n comma-separated integers.
void write_kernel_csv(std::ostream& out, const KernelMatrix& k);

}  // namespace tripletkit
