#pragma once

// Transitive-closure augmentation of anchor graphs and conflict detection.
//
// For every anchor graph G_i the closure G_i* holds (u, v) whenever v is
// reachable from u. On sound (acyclic) input this is the usual transitive
// closure. When contradictory triplets form directed cycles, every vertex of
// a strongly connected component reaches every other member, so each pair
// inside the component appears in both orientations; those pairs are the
// conflicts.

#include <cstddef>
#include <string_view>
#include <vector>

#include "tripletkit/anchor_graphs.hpp"
#include "tripletkit/triplets.hpp"

namespace tripletkit {

/// R(v) for every vertex, each sorted ascending. v never belongs to R(v).
struct ReachabilitySets {
  std::vector<std::vector<ObjectId>> sets;

  const std::vector<ObjectId>& operator[](ObjectId v) const { return sets[v]; }
};

/// Reachability on an anchor graph. Direct contradictions (2-cycles) are
/// tolerated; a simple cycle of length >= 3 raises CycleError with the cycle
/// as witness unless `allow_cycles` is set.
ReachabilitySets compute_reachability(const AnchorDag& g, bool allow_cycles = false);

/// G* with E(G*) = {(u, v) : v in R(u)}. Same cycle rules as compute_reachability.
AnchorDag transitive_closure(const AnchorDag& g, bool allow_cycles = false);

struct Conflict {
  ObjectId anchor = 0;
  ObjectId u = 0;  // u < v
  ObjectId v = 0;

  friend auto operator<=>(const Conflict&, const Conflict&) = default;
};

/// Conflicts sorted by (anchor, u, v), each listed once.
struct ConflictReport {
  std::vector<Conflict> conflicts;

  bool empty() const noexcept { return conflicts.empty(); }
  std::size_t size() const noexcept { return conflicts.size(); }
};

enum class ConflictPolicy {
  Report,    // keep both orientations, list them
  DropBoth,  // remove both orientations from the augmented set
  Fail,      // throw ConflictError
};

ConflictPolicy parse_conflict_policy(std::string_view s);

struct AugmentResult {
  TripletSet augmented;
  ConflictReport conflicts;
  std::size_t added = 0;  // closure triplets not present in the input
};

/// T* = union over anchors of E(G_i*). Anchors are processed in parallel; the
/// result is independent of the worker count.
AugmentResult augment(const TripletSet& ts, ConflictPolicy policy = ConflictPolicy::Report);

/// Writes "anchor,u,v" lines for each conflict.
void write_conflicts(std::ostream& out, const ConflictReport& report);

}  // namespace tripletkit
