#pragma once

#include <vector>

#include "rotor/graph.hpp"

namespace rotor {

// Breadth-first order of the shadow from a root; neighbours are taken by smallest joining arc id.
struct RootedOrder {
  std::vector<VertexId> order;   // order[0] is a root
  std::vector<VertexId> parent;  // kNoVertex at roots and outside the covered part
  std::vector<std::size_t> depth;
};

// Covers the root's component, and with whole_graph every other component too
// (each rooted at its smallest vertex id).
inline RootedOrder bfs_order(const RotorGraph& g, VertexId root, bool whole_graph = false) {
  const std::size_t n = g.vertex_count();
  RootedOrder r;
  r.parent.assign(n, kNoVertex);
  r.depth.assign(n, kNoSlot);
  auto run = [&](VertexId s) {
    std::size_t head = r.order.size();
    r.order.push_back(s);
    r.depth[ix(s)] = 0;
    while (head < r.order.size()) {
      VertexId u = r.order[head++];
      for (VertexId w : g.shadow_neighbors(u))
        if (r.depth[ix(w)] == kNoSlot) {
          r.depth[ix(w)] = r.depth[ix(u)] + 1;
          r.parent[ix(w)] = u;
          r.order.push_back(w);
        }
    }
  };
  run(root);
  if (whole_graph)
    for (std::size_t v = 0; v < n; ++v)
      if (r.depth[v] == kNoSlot) run(vertex_at(v));
  return r;
}

}  // namespace rotor
