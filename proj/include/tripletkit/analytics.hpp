#pragma once

// Kernel-based centrality and median, and kernel-free closeness estimates
// from anchor-graph degrees.
//
// Closeness follows the "rank 1 is the nearest" convention: close_x(y) is the
// position of y when all objects other than x are sorted by decreasing
// similarity to x. In G_x an edge a -> b says a is nearer to x than b, so
// in-neighbours of y are known to be nearer and out-neighbours farther:
//
//   in_degree(y) <= close_x(y) <= n - out_degree(y).

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tripletkit/anchor_graphs.hpp"
#include "tripletkit/kernel.hpp"

namespace tripletkit {

/// H(x, y): rank of y in row x of K. Rank 1 holds the largest off-diagonal
/// value, ties go to the lower id, and H(x, x) = 0. Rows are permutations of
/// {0, ..., n - 1}.
class RankMatrix {
 public:
  RankMatrix() = default;
  explicit RankMatrix(std::size_t n) : n_(n), ranks_(n * n, 0) {}

  std::size_t n() const noexcept { return n_; }
  std::uint32_t operator()(std::size_t x, std::size_t y) const { return ranks_[x * n_ + y]; }
  std::uint32_t& operator()(std::size_t x, std::size_t y) { return ranks_[x * n_ + y]; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> ranks_;
};

RankMatrix rank_rows(const KernelMatrix& k);

/// cent'(x) = l_p norm of column x of H. Smaller means more central.
struct CentralityVector {
  std::vector<double> values;
  double p = 1.0;
};

/// Throws ParameterError unless p is in [1, 3].
CentralityVector centrality(const KernelMatrix& k, double p = 1.0);
CentralityVector centrality(const RankMatrix& h, double p = 1.0);

/// Diagnostic only: cent_K(x) = sum over y != x of K(x, y).
std::vector<double> kernel_row_sums(const KernelMatrix& k);

/// argmin of cent', ties to the lowest id.
ObjectId median(const CentralityVector& c);

struct ClosenessBounds {
  std::uint32_t lower = 0;
  std::uint32_t upper = 0;

  /// close' = (lower + upper) / 2.
  double midpoint() const noexcept { return (lower + upper) / 2.0; }
};

/// O(1): (in_degree_{G_x}(y), n - out_degree_{G_x}(y)). Requires x != y.
ClosenessBounds closeness_bounds(const AnchorDagFamily& family, ObjectId x, ObjectId y);

double approx_closeness(const AnchorDagFamily& family, ObjectId x, ObjectId y);

/// The k objects with smallest close'_x, ascending, ties to the lower id.
/// Throws ParameterError unless 1 <= k < n.
std::vector<ObjectId> approx_knn(const AnchorDagFamily& family, ObjectId x, std::size_t k);

/// Candidates sorted by ascending close'_x (ties to lower id); x itself is skipped.
std::vector<ObjectId> rank_by_closeness(const AnchorDagFamily& family, ObjectId x,
                                        std::span<const ObjectId> candidates);

struct WeightedEdge {
  ObjectId to = 0;
  double weight = 1.0;
};

/// Undirected kNN graph; adjacency lists sorted by neighbour id.
struct KnnGraph {
  std::size_t n = 0;
  bool weighted = false;
  std::vector<std::vector<WeightedEdge>> adjacency;

  std::size_t degree(ObjectId v) const { return adjacency[v].size(); }
  /// Symmetric dense weight matrix, row-major.
  std::vector<double> dense_weights() const;
};

/// Edge {x, y} whenever y is among the approximate k nearest neighbours of x
/// (or vice versa). Weighted edges carry 1 / close'_x(y), the larger of the
/// two directions when both exist; unweighted edges carry 1.
KnnGraph build_knng(const AnchorDagFamily& family, std::size_t k, bool weighted);

}  // namespace tripletkit
