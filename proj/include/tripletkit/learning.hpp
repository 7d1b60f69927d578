#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tripletkit/analytics.hpp"

namespace tripletkit {

using Label = std::int32_t;

/// Disjoint train/test partition of [0, n).
struct LabeledSplit {
  std::vector<ObjectId> train;
  std::vector<Label> train_labels;  // aligned with train
  std::vector<ObjectId> test;
  double ratio = 0.7;
};

/// Seeded shuffle of [0, n); the first round(ratio * n) objects train.
LabeledSplit make_split(std::span<const Label> labels, double ratio, std::uint64_t seed);

/// Majority label of the first k entries of `ordered`; a tie goes to the
/// earliest neighbour carrying one of the tied labels.
Label majority_vote(std::span<const ObjectId> ordered, std::span<const Label> label_of, std::size_t k);

struct Classification {
  std::vector<std::optional<Label>> predictions;  // aligned with split.test; nullopt = abstained
  std::size_t abstentions = 0;
};

/// kNN classification by approximate closeness. Candidates are the training
/// objects ranked by close'_x. A test object whose anchor graph says nothing
/// about any training object is abstained.
Classification knn_classify(const AnchorDagFamily& family, const LabeledSplit& split, std::size_t k);

/// Percentage of non-abstained test predictions matching `truth` (indexed by object id).
double accuracy(const LabeledSplit& split, const Classification& c, std::span<const Label> truth);

struct KMeansResult {
  std::vector<std::uint32_t> assignment;
  Eigen::MatrixXd centers;  // clusters x dims
  double inertia = 0.0;
};

/// Lloyd's k-means with k-means++ seeding; best of `restarts` runs by inertia.
/// Rows of `points` are observations.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t clusters, std::size_t restarts,
                    std::uint64_t seed, std::size_t max_iterations = 300);

struct ClusterAssignment {
  std::vector<std::uint32_t> cluster;  // per object, in [0, clusters)
  std::size_t clusters = 0;
  std::size_t components = 0;          // connected components of the input graph
  std::string laplacian = "symmetric-normalized";
  std::vector<std::string> diagnostics;
};

/// Spectral clustering: eigenvectors of the `clusters` smallest eigenvalues of
/// I - D^{-1/2} W D^{-1/2}, rows normalized to unit length, then k-means with
/// 20 seeded restarts.
ClusterAssignment spectral_cluster(const KnnGraph& g, std::size_t clusters, std::uint64_t seed);

/// Sum over clusters of the majority-label count, divided by n, times 100.
double purity(std::span<const std::uint32_t> assignment, std::span<const Label> labels);

}  // namespace tripletkit
