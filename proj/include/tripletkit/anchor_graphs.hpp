#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tripletkit/triplets.hpp"

namespace tripletkit {

using Edge = std::pair<ObjectId, ObjectId>;

/// Directed graph over all n objects holding the triplets anchored at one object.
/// Edge (near, far) means near is closer to the anchor than far.
///
/// Out-neighbors are stored in compressed rows sorted by target; in/out degree
/// lookups are O(1).
class AnchorDag {
 public:
  AnchorDag() = default;
  /// `edges` need not be sorted; duplicates are collapsed.
  AnchorDag(ObjectId anchor, std::size_t n, std::vector<Edge> edges);

  ObjectId anchor() const noexcept { return anchor_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  std::span<const ObjectId> out_neighbors(ObjectId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::uint32_t out_degree(ObjectId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::uint32_t in_degree(ObjectId v) const { return in_degree_[v]; }

  bool has_edge(ObjectId from, ObjectId to) const;

  /// All edges in (from, to) lexicographic order.
  std::vector<Edge> edges() const;

 private:
  ObjectId anchor_ = 0;
  std::size_t n_ = 0;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<ObjectId> targets_;
  std::vector<std::uint32_t> in_degree_;
};

/// One anchor graph per object.
struct AnchorDagFamily {
  std::size_t n = 0;
  std::vector<AnchorDag> graphs;

  const AnchorDag& operator[](ObjectId anchor) const { return graphs[anchor]; }
  std::size_t total_edges() const;
};

/// Builds G_i for every anchor i. `n` defaults to the set's universe size.
AnchorDagFamily build_graphs(const TripletSet& ts, std::optional<std::size_t> n = std::nullopt);

/// Converts a family back into the anchor triplets it encodes.
TripletSet family_triplets(const AnchorDagFamily& family);

/// Returns a directed cycle as a vertex sequence (first vertex not repeated),
/// or nullopt when the graph is acyclic. Iterative, safe for long chains.
std::optional<std::vector<ObjectId>> find_cycle(const AnchorDag& g);

inline bool is_acyclic(const AnchorDag& g) { return !find_cycle(g).has_value(); }

/// Order of all n vertices in which every edge points forward.
/// Throws CycleError carrying a witness when the graph has a cycle.
std::vector<ObjectId> topological_order(const AnchorDag& g);

/// Debug export: one "near far" line per edge.
void write_edge_list(std::ostream& out, const AnchorDag& g);

}  // namespace tripletkit
