#include "tripletkit/anchor_graphs.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "tripletkit/errors.hpp"

namespace tripletkit {

AnchorDag::AnchorDag(ObjectId anchor, std::size_t n, std::vector<Edge> edges)
    : anchor_(anchor), n_(n), offsets_(n + 1, 0), in_degree_(n, 0) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  targets_.reserve(edges.size());
  for (const auto& [from, to] : edges) {
    if (from >= n || to >= n) {
      throw BoundsError("edge (" + std::to_string(from) + "," + std::to_string(to) +
                        ") outside universe of " + std::to_string(n));
    }
    if (from == to) throw ParameterError("self-loop at vertex " + std::to_string(from));
    ++offsets_[from + 1];
    ++in_degree_[to];
    targets_.push_back(to);
  }
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
}

bool AnchorDag::has_edge(ObjectId from, ObjectId to) const {
  auto nb = out_neighbors(from);
  return std::binary_search(nb.begin(), nb.end(), to);
}

std::vector<Edge> AnchorDag::edges() const {
  std::vector<Edge> out;
  out.reserve(targets_.size());
  for (ObjectId v = 0; v < n_; ++v) {
    for (auto w : out_neighbors(v)) out.emplace_back(v, w);
  }
  return out;
}

std::size_t AnchorDagFamily::total_edges() const {
  std::size_t total = 0;
  for (const auto& g : graphs) total += g.edge_count();
  return total;
}

AnchorDagFamily build_graphs(const TripletSet& ts, std::optional<std::size_t> n) {
  AnchorDagFamily family;
  family.n = n.value_or(ts.n());
  if (family.n < ts.n()) {
    throw BoundsError("universe size " + std::to_string(family.n) +
                      " smaller than triplet set universe " + std::to_string(ts.n()));
  }
  family.graphs.reserve(family.n);
  for (ObjectId i = 0; i < family.n; ++i) {
    auto run = ts.anchored_at(i);
    std::vector<Edge> edges;
    edges.reserve(run.size());
    for (const auto& t : run) edges.emplace_back(t.near, t.far);
    family.graphs.emplace_back(i, family.n, std::move(edges));
  }
  return family;
}

TripletSet family_triplets(const AnchorDagFamily& family) {
  std::vector<Triplet> out;
  out.reserve(family.total_edges());
  for (const auto& g : family.graphs) {
    for (const auto& [near, far] : g.edges()) out.push_back({g.anchor(), near, far});
  }
  return TripletSet(std::move(out), family.n);
}

namespace {

enum class Color : std::uint8_t { White, Gray, Black };

struct Frame {
  ObjectId vertex;
  std::uint32_t next;  // index into out_neighbors
};

// Iterative DFS over all vertices. Calls on_finish(v) in post-order.
// Returns the first cycle found (as a vertex sequence) or nullopt.
template <typename OnFinish>
std::optional<std::vector<ObjectId>> dfs_all(const AnchorDag& g, OnFinish&& on_finish) {
  const auto n = g.n();
  std::vector<Color> color(n, Color::White);
  std::vector<Frame> stack;
  for (ObjectId root = 0; root < n; ++root) {
    if (color[root] != Color::White) continue;
    color[root] = Color::Gray;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& top = stack.back();
      auto nb = g.out_neighbors(top.vertex);
      if (top.next < nb.size()) {
        ObjectId w = nb[top.next++];
        if (color[w] == Color::White) {
          color[w] = Color::Gray;
          stack.push_back({w, 0});
        } else if (color[w] == Color::Gray) {
          // Back edge: the cycle is the stack suffix starting at w.
          std::vector<ObjectId> cycle;
          auto it = std::find_if(stack.begin(), stack.end(),
                                 [w](const Frame& f) { return f.vertex == w; });
          for (; it != stack.end(); ++it) cycle.push_back(it->vertex);
          return cycle;
        }
      } else {
        color[top.vertex] = Color::Black;
        on_finish(top.vertex);
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<ObjectId>> find_cycle(const AnchorDag& g) {
  return dfs_all(g, [](ObjectId) {});
}

std::vector<ObjectId> topological_order(const AnchorDag& g) {
  std::vector<ObjectId> post;
  post.reserve(g.n());
  auto cycle = dfs_all(g, [&](ObjectId v) { post.push_back(v); });
  if (cycle) {
    throw CycleError("graph of anchor " + std::to_string(g.anchor()) + " contains a cycle",
                     std::move(*cycle));
  }
  std::reverse(post.begin(), post.end());
  return post;
}

void write_edge_list(std::ostream& out, const AnchorDag& g) {
  for (const auto& [from, to] : g.edges()) out << from << ' ' << to << '\n';
}

}  // namespace tripletkit
