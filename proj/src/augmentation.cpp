#include "tripletkit/augmentation.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <ostream>
#include <string>

#include "tripletkit/errors.hpp"
#include "tripletkit/parallel.hpp"

namespace tripletkit {

ConflictPolicy parse_conflict_policy(std::string_view s) {
  if (s == "report") return ConflictPolicy::Report;
  if (s == "drop" || s == "drop-both") return ConflictPolicy::DropBoth;
  if (s == "fail") return ConflictPolicy::Fail;
  throw ParameterError("unknown conflict policy '" + std::string(s) +
                       "' (expected report, drop or fail)");
}

namespace {

constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();

// Above this universe size reachability sets stay sparse regardless of density.
constexpr std::size_t kBitsetMaxN = 4096;

struct Components {
  std::vector<std::uint32_t> comp_of;  // kUnvisited for vertices never reached from a source
  // Members per component, in Tarjan emission order (sinks before sources).
  std::vector<std::vector<ObjectId>> members;
};

// Iterative Tarjan over every vertex with outgoing edges.
Components strongly_connected(const AnchorDag& g) {
  const auto n = g.n();
  Components out;
  out.comp_of.assign(n, kUnvisited);
  std::vector<std::uint32_t> index(n, kUnvisited);
  std::vector<std::uint32_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<ObjectId> stack;
  struct Frame {
    ObjectId v;
    std::uint32_t next;
  };
  std::vector<Frame> frames;
  std::uint32_t counter = 0;

  auto visit = [&](ObjectId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    frames.push_back({v, 0});
  };

  for (ObjectId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited || g.out_degree(root) == 0) continue;
    visit(root);
    while (!frames.empty()) {
      auto& f = frames.back();
      auto nb = g.out_neighbors(f.v);
      if (f.next < nb.size()) {
        ObjectId w = nb[f.next++];
        if (index[w] == kUnvisited) {
          visit(w);
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      ObjectId v = f.v;
      frames.pop_back();
      if (low[v] == index[v]) {
        auto id = static_cast<std::uint32_t>(out.members.size());
        std::vector<ObjectId> comp;
        while (true) {
          ObjectId w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.comp_of[w] = id;
          comp.push_back(w);
          if (w == v) break;
        }
        std::sort(comp.begin(), comp.end());
        out.members.push_back(std::move(comp));
      }
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
    }
  }
  return out;
}

// A component of size >= 3 made only of mutual pairs arranged as a tree holds
// nothing but 2-cycles. Anything else inside a nontrivial component closes a
// simple cycle of length >= 3; this returns one, or an empty vector.
std::vector<ObjectId> long_cycle_in(const AnchorDag& g, const Components& cc, std::uint32_t id) {
  const auto& members = cc.members[id];
  if (members.size() < 3) return {};
  for (ObjectId u : members) {
    for (ObjectId v : g.out_neighbors(u)) {
      if (cc.comp_of[v] != id) continue;
      // Shortest path v ~> u inside the component that avoids the edge v -> u.
      std::vector<ObjectId> parent(g.n(), kUnvisited);
      std::deque<ObjectId> queue{v};
      parent[v] = v;
      bool found = false;
      while (!queue.empty() && !found) {
        ObjectId x = queue.front();
        queue.pop_front();
        for (ObjectId y : g.out_neighbors(x)) {
          if (cc.comp_of[y] != id || parent[y] != kUnvisited) continue;
          if (x == v && y == u) continue;
          parent[y] = x;
          if (y == u) {
            found = true;
            break;
          }
          queue.push_back(y);
        }
      }
      if (!found) continue;
      std::vector<ObjectId> path;
      for (ObjectId x = u; x != v; x = parent[x]) path.push_back(x);
      path.push_back(v);
      std::reverse(path.begin(), path.end());  // v ... u, then the edge u -> v closes it
      std::rotate(path.begin(), path.end() - 1, path.end());
      return path;  // u, v, ...
    }
  }
  return {};
}

struct Closure {
  std::vector<Edge> edges;                       // sorted (u, v)
  std::vector<std::vector<ObjectId>> cyclic;     // nontrivial components, sorted members
};

Closure close_graph(const AnchorDag& g, bool allow_cycles, bool drop_conflicts) {
  const auto n = g.n();
  Closure out;
  if (g.edge_count() == 0) return out;

  const auto cc = strongly_connected(g);
  const auto ncomp = cc.members.size();
  for (std::uint32_t id = 0; id < ncomp; ++id) {
    if (cc.members[id].size() < 2) continue;
    if (!allow_cycles) {
      auto witness = long_cycle_in(g, cc, id);
      if (!witness.empty()) {
        throw CycleError("graph of anchor " + std::to_string(g.anchor()) +
                             " has a cycle of length " + std::to_string(witness.size()),
                         std::move(witness));
      }
    }
    out.cyclic.push_back(cc.members[id]);
  }

  const bool dense = n <= kBitsetMaxN && g.edge_count() >= n;
  const std::size_t words = (n + 63) / 64;

  // Component reach sets, indexed by component id; filled in emission order,
  // which visits every successor component first.
  std::vector<std::vector<std::uint64_t>> bits;
  std::vector<std::vector<ObjectId>> lists;
  std::vector<std::uint32_t> stamp;
  if (dense) {
    bits.resize(ncomp);
  } else {
    lists.resize(ncomp);
    stamp.assign(n, 0);
  }

  for (std::uint32_t id = 0; id < ncomp; ++id) {
    const auto& members = cc.members[id];
    const bool cyclic = members.size() >= 2;
    bool any_out = false;
    for (ObjectId c : members) any_out |= g.out_degree(c) > 0;
    if (!any_out) continue;

    if (dense) {
      auto& set = bits[id];
      set.assign(words, 0);
      if (cyclic) {
        for (ObjectId c : members) set[c >> 6] |= std::uint64_t{1} << (c & 63);
      }
      for (ObjectId c : members) {
        for (ObjectId w : g.out_neighbors(c)) {
          auto wc = cc.comp_of[w];
          if (wc == id) continue;
          set[w >> 6] |= std::uint64_t{1} << (w & 63);
          if (wc != kUnvisited && !bits[wc].empty()) {
            for (std::size_t k = 0; k < words; ++k) set[k] |= bits[wc][k];
          }
        }
      }
    } else {
      auto& set = lists[id];
      const auto mark = id + 1;
      auto add = [&](ObjectId x) {
        if (stamp[x] != mark) {
          stamp[x] = mark;
          set.push_back(x);
        }
      };
      if (cyclic) {
        for (ObjectId c : members) add(c);
      }
      for (ObjectId c : members) {
        for (ObjectId w : g.out_neighbors(c)) {
          auto wc = cc.comp_of[w];
          if (wc == id) continue;
          add(w);
          if (wc != kUnvisited) {
            for (ObjectId x : lists[wc]) add(x);
          }
        }
      }
      std::sort(set.begin(), set.end());
    }
  }

  for (ObjectId u = 0; u < n; ++u) {
    if (g.out_degree(u) == 0) continue;
    const auto uc = cc.comp_of[u];
    const bool skip_own = drop_conflicts && cc.members[uc].size() >= 2;
    auto emit = [&](ObjectId v) {
      if (v == u) return;
      if (skip_own && cc.comp_of[v] == uc) return;
      out.edges.emplace_back(u, v);
    };
    if (dense) {
      const auto& set = bits[uc];
      for (std::size_t k = 0; k < words; ++k) {
        auto word = set[k];
        while (word) {
          auto bit = static_cast<ObjectId>(std::countr_zero(word));
          emit(static_cast<ObjectId>(k * 64) + bit);
          word &= word - 1;
        }
      }
    } else {
      for (ObjectId v : lists[uc]) emit(v);
    }
  }
  return out;
}

}  // namespace

ReachabilitySets compute_reachability(const AnchorDag& g, bool allow_cycles) {
  auto closure = close_graph(g, allow_cycles, false);
  ReachabilitySets r;
  r.sets.resize(g.n());
  for (const auto& [u, v] : closure.edges) r.sets[u].push_back(v);
  return r;
}

AnchorDag transitive_closure(const AnchorDag& g, bool allow_cycles) {
  auto closure = close_graph(g, allow_cycles, false);
  return AnchorDag(g.anchor(), g.n(), std::move(closure.edges));
}

AugmentResult augment(const TripletSet& ts, ConflictPolicy policy) {
  const auto family = build_graphs(ts);
  const auto n = family.n;
  const bool drop = policy == ConflictPolicy::DropBoth;

  std::vector<std::vector<Triplet>> per_anchor(n);
  std::vector<std::vector<Conflict>> per_anchor_conflicts(n);
  parallel_for(n, [&](std::size_t i) {
    const auto& g = family.graphs[i];
    auto closure = close_graph(g, true, drop);
    auto anchor = static_cast<ObjectId>(i);
    auto& out = per_anchor[i];
    out.reserve(closure.edges.size());
    for (const auto& [u, v] : closure.edges) out.push_back({anchor, u, v});
    auto& conflicts = per_anchor_conflicts[i];
    for (const auto& comp : closure.cyclic) {
      for (std::size_t a = 0; a < comp.size(); ++a) {
        for (std::size_t b = a + 1; b < comp.size(); ++b) conflicts.push_back({anchor, comp[a], comp[b]});
      }
    }
    std::sort(conflicts.begin(), conflicts.end());
  });

  AugmentResult result;
  std::size_t total = 0;
  for (const auto& v : per_anchor) total += v.size();
  std::vector<Triplet> all;
  all.reserve(total);
  for (auto& v : per_anchor) {
    all.insert(all.end(), v.begin(), v.end());
    std::vector<Triplet>().swap(v);
  }
  for (auto& v : per_anchor_conflicts) {
    result.conflicts.conflicts.insert(result.conflicts.conflicts.end(), v.begin(), v.end());
  }
  if (policy == ConflictPolicy::Fail && !result.conflicts.empty()) {
    const auto& c = result.conflicts.conflicts.front();
    throw ConflictError(std::to_string(result.conflicts.size()) +
                        " conflicting triplet pairs after closure; first at anchor " +
                        std::to_string(c.anchor) + " between " + std::to_string(c.u) + " and " +
                        std::to_string(c.v));
  }
  result.augmented = TripletSet::from_sorted(std::move(all), n);

  // |T*| - |T| is not the added count under DropBoth, where input triplets can be removed.
  std::size_t kept_inputs = 0;
  for (const auto& t : ts) kept_inputs += result.augmented.contains(t) ? 1 : 0;
  result.added = result.augmented.size() - kept_inputs;
  return result;
}

void write_conflicts(std::ostream& out, const ConflictReport& report) {
  for (const auto& c : report.conflicts) out << c.anchor << ',' << c.u << ',' << c.v << '\n';
}

}  // namespace tripletkit
