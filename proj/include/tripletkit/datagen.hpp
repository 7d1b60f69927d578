#pragma once

// Feature datasets, true distance matrices and synthetic triplet generation.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tripletkit/learning.hpp"
#include "tripletkit/triplets.hpp"

namespace tripletkit {

enum class Metric { Euclidean, Cosine, Cityblock };

Metric parse_metric(std::string_view s);
std::string_view metric_name(Metric m);

struct Dataset {
  Eigen::MatrixXd features;            // n x d
  std::optional<std::vector<Label>> labels;
  std::vector<std::string> label_names;  // label id -> original text
  Metric metric = Metric::Euclidean;

  std::size_t size() const noexcept { return static_cast<std::size_t>(features.rows()); }
};

/// Reads a numeric CSV; a first line containing letters is taken as a header.
/// With `has_labels` the last column is the label (any text, ids assigned in
/// order of first appearance).
Dataset load_dataset_csv(const std::filesystem::path& path, bool has_labels,
                         Metric metric = Metric::Euclidean);

/// Indices of rows identical to an earlier row.
std::vector<std::size_t> duplicate_rows(const Dataset& ds);

/// Copy without the rows reported by duplicate_rows.
Dataset drop_duplicate_rows(const Dataset& ds);

/// Symmetric n x n matrix with zero diagonal, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

  /// Sample standard deviation of the off-diagonal entries (each pair once).
  double off_diagonal_stddev() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Pairwise distances under the dataset metric. Cosine distance is
/// 1 - cosine similarity and rejects zero-norm rows.
DistanceMatrix distance_matrix(const Dataset& ds);

/// Similarity S = -D.
inline double similarity(const DistanceMatrix& d, std::size_t i, std::size_t j) { return -d(i, j); }

/// n (n - 1) (n - 2) / 2: anchored comparisons (x, {y, z}).
std::uint64_t total_anchor_comparisons(std::uint64_t n);
/// n choose 3: unordered object triples.
std::uint64_t total_unordered_triples(std::uint64_t n);

/// Seeded bijection on [0, domain) (balanced Feistel network with cycle walking).
class FeistelPermutation {
 public:
  FeistelPermutation(std::uint64_t domain, std::uint64_t seed);

  std::uint64_t domain() const noexcept { return domain_; }
  std::uint64_t operator()(std::uint64_t i) const;

 private:
  std::uint64_t encrypt(std::uint64_t x) const;

  std::uint64_t domain_;
  unsigned half_bits_ = 1;
  std::uint64_t half_mask_ = 1;
  std::array<std::uint64_t, 4> keys_{};
};

struct GeneratedTriplets {
  TripletForm form = TripletForm::Anchor;
  /// Records in the generated form, in sampling order.
  std::vector<std::array<ObjectId, 3>> raw;
  /// Records translated to anchor form.
  TripletSet triplets;
  std::uint64_t requested = 0;
  /// Sampled candidates discarded because the distances involved were tied.
  std::uint64_t ties_skipped = 0;
};

/// Samples floor(fraction * total) candidates uniformly without replacement and
/// emits each as a triplet consistent with D. Anchor form samples anchored
/// comparisons (total = n(n-1)(n-2)/2); central and outlier forms sample
/// unordered triples (total = n choose 3) and emit the central element or the
/// outlier. Tied candidates are skipped and replaced by further samples.
/// Throws ParameterError for fraction outside (0, 1] or duplicate objects (a
/// zero off-diagonal distance).
GeneratedTriplets generate_triplets(const DistanceMatrix& d, double fraction, std::uint64_t seed,
                                    TripletForm form = TripletForm::Anchor);

}  // namespace tripletkit
