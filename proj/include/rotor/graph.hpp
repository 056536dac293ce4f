#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rotor/errors.hpp"

namespace rotor {

enum class VertexId : std::uint32_t {};
enum class ArcId : std::uint32_t {};

inline constexpr VertexId kNoVertex{0xffffffffu};
inline constexpr ArcId kNoArc{0xffffffffu};

constexpr std::size_t ix(VertexId v) { return static_cast<std::size_t>(v); }
constexpr std::size_t ix(ArcId a) { return static_cast<std::size_t>(a); }
constexpr VertexId vertex_at(std::size_t i) { return VertexId{static_cast<std::uint32_t>(i)}; }
constexpr ArcId arc_at(std::size_t i) { return ArcId{static_cast<std::uint32_t>(i)}; }

enum class VertexRole : std::uint8_t { plain, sink };

struct Arc {
  VertexId tail;
  VertexId head;
};

// One distinct out-neighbour and the number of parallel arcs towards it.
struct NeighborSlot {
  VertexId head;
  std::uint32_t multiplicity;
};

inline constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);

// Directed multigraph with an explicit cyclic rotor order at each vertex.
// Construction only checks that ids are in range; validate() reports the rest.
class RotorGraph {
 public:
  RotorGraph() = default;

  RotorGraph(std::vector<std::string> names, std::vector<VertexRole> roles, std::vector<Arc> arcs,
             std::vector<std::vector<ArcId>> rotor_order)
      : names_(std::move(names)), roles_(std::move(roles)), arcs_(std::move(arcs)), order_(std::move(rotor_order)) {
    const std::size_t n = names_.size();
    if (roles_.size() != n || order_.size() != n)
      throw std::invalid_argument("RotorGraph: names, roles and rotor orders differ in length");
    for (const Arc& a : arcs_)
      if (ix(a.tail) >= n || ix(a.head) >= n) throw std::invalid_argument("RotorGraph: arc endpoint out of range");
    for (const auto& ord : order_)
      for (ArcId a : ord)
        if (ix(a) >= arcs_.size()) throw std::invalid_argument("RotorGraph: rotor order names unknown arc");
    index();
  }

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }

  const std::string& name(VertexId v) const { return names_[ix(v)]; }
  VertexRole role(VertexId v) const { return roles_[ix(v)]; }
  bool is_sink(VertexId v) const { return roles_[ix(v)] == VertexRole::sink; }

  std::optional<VertexId> find_vertex(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return vertex_at(i);
    return std::nullopt;
  }

  const Arc& arc(ArcId a) const { return arcs_[ix(a)]; }
  VertexId tail(ArcId a) const { return arcs_[ix(a)].tail; }
  VertexId head(ArcId a) const { return arcs_[ix(a)].head; }

  std::span<const ArcId> rotor_order(VertexId u) const { return order_[ix(u)]; }
  std::span<const ArcId> out_arcs(VertexId u) const { return out_arcs_[ix(u)]; }
  std::span<const ArcId> in_arcs(VertexId u) const { return in_arcs_[ix(u)]; }
  std::size_t out_degree(VertexId u) const { return out_arcs_[ix(u)].size(); }

  // Index of an arc inside the rotor order of its tail.
  std::size_t rotor_position(ArcId a) const { return position_[ix(a)]; }

  // Cyclic successor in the rotor order at the tail of a.
  ArcId theta(ArcId a) const {
    const auto& ord = order_[ix(arcs_[ix(a)].tail)];
    std::size_t p = position_[ix(a)];
    if (p == kNoSlot) throw std::invalid_argument("theta: arc missing from the rotor order of its tail");
    return ord[p + 1 == ord.size() ? 0 : p + 1];
  }

  // Distinct heads of out-arcs, in order of first arc id.
  std::span<const NeighborSlot> out_neighbors(VertexId u) const {
    return {slots_.data() + slot_offset_[ix(u)], slot_offset_[ix(u) + 1] - slot_offset_[ix(u)]};
  }
  std::size_t neighbor_slot(ArcId a) const { return arc_slot_[ix(a)]; }
  std::size_t multiplicity(VertexId u, std::size_t slot) const { return out_neighbors(u)[slot].multiplicity; }

  std::size_t slot_of(VertexId u, VertexId v) const {
    auto nb = out_neighbors(u);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (nb[k].head == v) return k;
    return kNoSlot;
  }
  // Slot of u among the out-neighbours of the head of (u, slot), or kNoSlot.
  std::size_t reverse_slot(VertexId u, std::size_t slot) const { return reverse_slot_[slot_offset_[ix(u)] + slot]; }

  // Directed pairs (u,v) that carry at least one arc, numbered consecutively.
  std::size_t pair_count() const { return slots_.size(); }
  std::size_t pair_id(VertexId u, std::size_t slot) const { return slot_offset_[ix(u)] + slot; }
  std::pair<VertexId, std::size_t> pair_at(std::size_t id) const {
    auto it = std::upper_bound(slot_offset_.begin(), slot_offset_.end(), id);
    std::size_t u = static_cast<std::size_t>(it - slot_offset_.begin()) - 1;
    return {vertex_at(u), id - slot_offset_[u]};
  }

  std::span<const VertexId> in_neighbors(VertexId u) const { return in_neighbors_[ix(u)]; }

  // Neighbours in the undirected shadow, ordered by the smallest arc id joining the pair.
  std::span<const VertexId> shadow_neighbors(VertexId u) const { return shadow_[ix(u)]; }
  std::size_t shadow_edge_count() const {
    std::size_t s = 0;
    for (const auto& nb : shadow_) s += nb.size();
    return s / 2;
  }

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<VertexRole>& roles() const { return roles_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<std::vector<ArcId>>& rotor_orders() const { return order_; }

 private:
  void index() {
    const std::size_t n = names_.size();
    out_arcs_.assign(n, {});
    in_arcs_.assign(n, {});
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      out_arcs_[ix(arcs_[i].tail)].push_back(arc_at(i));
      in_arcs_[ix(arcs_[i].head)].push_back(arc_at(i));
    }
    position_.assign(arcs_.size(), kNoSlot);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t p = 0; p < order_[u].size(); ++p) {
        ArcId a = order_[u][p];
        if (ix(arcs_[ix(a)].tail) == u && position_[ix(a)] == kNoSlot) position_[ix(a)] = p;
      }

    slot_offset_.assign(n + 1, 0);
    slots_.clear();
    arc_slot_.assign(arcs_.size(), kNoSlot);
    for (std::size_t u = 0; u < n; ++u) {
      slot_offset_[u] = slots_.size();
      for (ArcId a : out_arcs_[u]) {
        VertexId h = arcs_[ix(a)].head;
        std::size_t k = slot_offset_[u];
        while (k < slots_.size() && slots_[k].head != h) ++k;
        if (k == slots_.size()) slots_.push_back({h, 0});
        ++slots_[k].multiplicity;
        arc_slot_[ix(a)] = k - slot_offset_[u];
      }
    }
    slot_offset_[n] = slots_.size();

    in_neighbors_.assign(n, {});
    std::unordered_map<std::uint64_t, std::size_t> pair_index;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t k = slot_offset_[u]; k < slot_offset_[u + 1]; ++k) {
        std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(slots_[k].head);
        pair_index.emplace(key, k - slot_offset_[u]);
        in_neighbors_[ix(slots_[k].head)].push_back(vertex_at(u));
      }
    reverse_slot_.assign(slots_.size(), kNoSlot);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t k = slot_offset_[u]; k < slot_offset_[u + 1]; ++k) {
        std::uint64_t key = (static_cast<std::uint64_t>(ix(slots_[k].head)) << 32) | static_cast<std::uint32_t>(u);
        if (auto it = pair_index.find(key); it != pair_index.end()) reverse_slot_[k] = it->second;
      }

    // Arcs are visited in id order, so first insertion gives the smallest joining arc id.
    shadow_.assign(n, {});
    std::unordered_map<std::uint64_t, bool> seen;
    for (const Arc& a : arcs_) {
      if (a.tail == a.head) continue;
      auto lo = std::min(ix(a.tail), ix(a.head)), hi = std::max(ix(a.tail), ix(a.head));
      if (seen.emplace((static_cast<std::uint64_t>(lo) << 32) | hi, true).second) {
        shadow_[lo].push_back(vertex_at(hi));
        shadow_[hi].push_back(vertex_at(lo));
      }
    }
  }

  std::vector<std::string> names_;
  std::vector<VertexRole> roles_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> order_;

  std::vector<std::vector<ArcId>> out_arcs_, in_arcs_;
  std::vector<std::size_t> position_;
  std::vector<std::size_t> slot_offset_;
  std::vector<NeighborSlot> slots_;
  std::vector<std::size_t> arc_slot_;
  std::vector<std::size_t> reverse_slot_;
  std::vector<std::vector<VertexId>> in_neighbors_;
  std::vector<std::vector<VertexId>> shadow_;
};

// Incremental construction by name; rotor order defaults to declaration order.
class GraphBuilder {
 public:
  VertexId add_vertex(std::string name, VertexRole role = VertexRole::plain) {
    names_.push_back(std::move(name));
    roles_.push_back(role);
    order_.emplace_back();
    explicit_order_.push_back(false);
    return vertex_at(names_.size() - 1);
  }
  VertexId add_sink(std::string name) { return add_vertex(std::move(name), VertexRole::sink); }

  ArcId add_arc(VertexId tail, VertexId head) {
    arcs_.push_back({tail, head});
    ArcId a = arc_at(arcs_.size() - 1);
    if (ix(tail) < order_.size() && !explicit_order_[ix(tail)]) order_[ix(tail)].push_back(a);
    return a;
  }
  // Adds `count` parallel arcs and returns the first id.
  ArcId add_arcs(VertexId tail, VertexId head, std::size_t count) {
    ArcId first = add_arc(tail, head);
    for (std::size_t i = 1; i < count; ++i) add_arc(tail, head);
    return first;
  }

  void set_rotor_order(VertexId u, std::vector<ArcId> order) {
    order_[ix(u)] = std::move(order);
    explicit_order_[ix(u)] = true;
  }

  RotorGraph build() const { return RotorGraph(names_, roles_, arcs_, order_); }

 private:
  std::vector<std::string> names_;
  std::vector<VertexRole> roles_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> order_;
  std::vector<bool> explicit_order_;
};

enum class ViolationKind {
  loop_arc,
  sink_has_out_arc,
  plain_without_out_arc,
  no_sink,
  rotor_order_not_permutation,
};

struct Violation {
  ViolationKind kind;
  VertexId vertex = kNoVertex;
  ArcId arc = kNoArc;
  std::string message;
};

inline std::vector<Violation> validate(const RotorGraph& g) {
  std::vector<Violation> out;
  bool any_sink = false;
  for (std::size_t i = 0; i < g.arc_count(); ++i) {
    const Arc& a = g.arc(arc_at(i));
    if (a.tail == a.head)
      out.push_back({ViolationKind::loop_arc, a.tail, arc_at(i), "loop arc at vertex " + g.name(a.tail)});
  }
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    VertexId v = vertex_at(i);
    if (g.is_sink(v)) {
      any_sink = true;
      if (g.out_degree(v) != 0)
        out.push_back({ViolationKind::sink_has_out_arc, v, g.out_arcs(v)[0], "sink " + g.name(v) + " has an out-arc"});
      continue;
    }
    if (g.out_degree(v) == 0)
      out.push_back({ViolationKind::plain_without_out_arc, v, kNoArc, "vertex " + g.name(v) + " has no out-arc"});
    auto ord = g.rotor_order(v);
    std::vector<ArcId> sorted(ord.begin(), ord.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<ArcId> expected(g.out_arcs(v).begin(), g.out_arcs(v).end());
    if (sorted != expected)
      out.push_back({ViolationKind::rotor_order_not_permutation, v, kNoArc,
                     "rotor order of " + g.name(v) + " is not a permutation of its out-arcs"});
  }
  if (!any_sink) out.push_back({ViolationKind::no_sink, kNoVertex, kNoArc, "graph has no sink"});
  return out;
}

inline void require_valid(const RotorGraph& g) {
  auto v = validate(g);
  if (!v.empty()) throw InvalidInstance(v.front().message);
}

// No two out-arcs of a vertex share a head.
inline bool is_simple(const RotorGraph& g) {
  for (std::size_t u = 0; u < g.vertex_count(); ++u)
    if (g.out_neighbors(vertex_at(u)).size() != g.out_degree(vertex_at(u))) return false;
  return true;
}

// Shadow component label per vertex; returns the number of components.
inline std::size_t shadow_components(const RotorGraph& g, std::vector<std::size_t>& label) {
  const std::size_t n = g.vertex_count();
  label.assign(n, kNoSlot);
  std::size_t count = 0;
  std::vector<VertexId> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != kNoSlot) continue;
    label[s] = count;
    stack.push_back(vertex_at(s));
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (VertexId w : g.shadow_neighbors(u))
        if (label[ix(w)] == kNoSlot) {
          label[ix(w)] = count;
          stack.push_back(w);
        }
    }
    ++count;
  }
  return count;
}

inline bool sinks_are_leaves(const RotorGraph& g) {
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (g.is_sink(vertex_at(v)) && g.shadow_neighbors(vertex_at(v)).size() > 1) return false;
  return true;
}

// Every shadow component is a tree and every sink is a leaf.
inline bool is_forest_like(const RotorGraph& g) {
  std::vector<std::size_t> label;
  std::size_t c = shadow_components(g, label);
  for (std::size_t i = 0; i < g.arc_count(); ++i)
    if (g.arc(arc_at(i)).tail == g.arc(arc_at(i)).head) return false;
  return g.shadow_edge_count() + c == g.vertex_count() && sinks_are_leaves(g);
}

// Shadow is a tree and every sink is a leaf.
inline bool is_tree_like(const RotorGraph& g) {
  if (g.vertex_count() == 0) return false;
  std::vector<std::size_t> label;
  return shadow_components(g, label) == 1 && is_forest_like(g);
}

// Vertices from which some sink is reachable.
inline std::vector<bool> reaches_sink(const RotorGraph& g) {
  std::vector<bool> ok(g.vertex_count(), false);
  std::vector<VertexId> stack;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (g.is_sink(vertex_at(v))) {
      ok[v] = true;
      stack.push_back(vertex_at(v));
    }
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (ArcId a : g.in_arcs(v))
      if (!ok[ix(g.tail(a))]) {
        ok[ix(g.tail(a))] = true;
        stack.push_back(g.tail(a));
      }
  }
  return ok;
}

inline bool is_stopping(const RotorGraph& g) {
  auto ok = reaches_sink(g);
  return std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
}

// Strongly connected components of plain vertices with no arc leaving them.
// Returns a component index per vertex (kNoSlot outside such components).
inline std::vector<std::size_t> sink_components(const RotorGraph& g, std::size_t* count = nullptr) {
  const std::size_t n = g.vertex_count();
  // Iterative Tarjan.
  std::vector<std::size_t> index(n, kNoSlot), low(n, 0), comp(n, kNoSlot);
  std::vector<bool> on_stack(n, false);
  std::vector<VertexId> stack;
  std::vector<std::pair<VertexId, std::size_t>> call;
  std::size_t counter = 0, ncomp = 0;
  std::vector<std::vector<VertexId>> comps;
  for (std::size_t s = 0; s < n; ++s) {
    if (index[s] != kNoSlot) continue;
    call.push_back({vertex_at(s), 0});
    index[s] = low[s] = counter++;
    stack.push_back(vertex_at(s));
    on_stack[s] = true;
    while (!call.empty()) {
      auto& [v, k] = call.back();
      auto out = g.out_arcs(v);
      if (k < out.size()) {
        VertexId w = g.head(out[k++]);
        if (index[ix(w)] == kNoSlot) {
          index[ix(w)] = low[ix(w)] = counter++;
          stack.push_back(w);
          on_stack[ix(w)] = true;
          call.push_back({w, 0});
        } else if (on_stack[ix(w)]) {
          low[ix(v)] = std::min(low[ix(v)], index[ix(w)]);
        }
        continue;
      }
      VertexId done = v;
      call.pop_back();
      if (!call.empty()) low[ix(call.back().first)] = std::min(low[ix(call.back().first)], low[ix(done)]);
      if (low[ix(done)] == index[ix(done)]) {
        std::vector<VertexId> members;
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[ix(w)] = false;
          members.push_back(w);
        } while (w != done);
        comps.push_back(std::move(members));
      }
    }
  }
  std::vector<std::size_t> scc(n);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (VertexId v : comps[c]) scc[ix(v)] = c;
  for (const auto& members : comps) {
    bool closed = true;
    for (VertexId v : members) {
      if (g.is_sink(v)) closed = false;
      for (ArcId a : g.out_arcs(v))
        if (scc[ix(g.head(a))] != scc[ix(v)]) closed = false;
    }
    if (!closed) continue;
    for (VertexId v : members) comp[ix(v)] = ncomp;
    ++ncomp;
  }
  if (count) *count = ncomp;
  return comp;
}

// A graph derived from another one, with maps back to the original ids.
struct DerivedGraph {
  RotorGraph graph;
  std::vector<VertexId> vertex_origin;  // new vertex -> original vertex (kNoVertex for fresh sinks)
  std::vector<ArcId> arc_origin;        // new arc -> original arc
  std::vector<VertexId> vertex_image;   // original vertex -> new vertex
  std::vector<std::size_t> fresh_component;  // new vertex -> contracted component index or kNoSlot
};

// Replaces every closed component by a fresh sink.
inline DerivedGraph contract_sink_components(const RotorGraph& g) {
  std::size_t ncomp = 0;
  auto comp = sink_components(g, &ncomp);
  DerivedGraph d;
  std::vector<std::string> names;
  std::vector<VertexRole> roles;
  d.vertex_image.assign(g.vertex_count(), kNoVertex);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (comp[v] != kNoSlot) continue;
    d.vertex_image[v] = vertex_at(names.size());
    names.push_back(g.name(vertex_at(v)));
    roles.push_back(g.role(vertex_at(v)));
    d.vertex_origin.push_back(vertex_at(v));
    d.fresh_component.push_back(kNoSlot);
  }
  std::vector<VertexId> comp_vertex(ncomp);
  for (std::size_t c = 0; c < ncomp; ++c) {
    comp_vertex[c] = vertex_at(names.size());
    std::string label = "C" + std::to_string(c);
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
      if (comp[v] == c) {
        label += "_" + g.name(vertex_at(v));
        break;
      }
    names.push_back(label);
    roles.push_back(VertexRole::sink);
    d.vertex_origin.push_back(kNoVertex);
    d.fresh_component.push_back(c);
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (comp[v] != kNoSlot) d.vertex_image[v] = comp_vertex[comp[v]];

  std::vector<Arc> arcs;
  std::vector<ArcId> new_id(g.arc_count(), kNoArc);
  for (std::size_t i = 0; i < g.arc_count(); ++i) {
    const Arc& a = g.arc(arc_at(i));
    if (comp[ix(a.tail)] != kNoSlot) continue;
    new_id[i] = arc_at(arcs.size());
    arcs.push_back({d.vertex_image[ix(a.tail)], d.vertex_image[ix(a.head)]});
    d.arc_origin.push_back(arc_at(i));
  }
  std::vector<std::vector<ArcId>> order(names.size());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (comp[v] != kNoSlot) continue;
    for (ArcId a : g.rotor_order(vertex_at(v))) order[ix(d.vertex_image[v])].push_back(new_id[ix(a)]);
  }
  d.graph = RotorGraph(std::move(names), std::move(roles), std::move(arcs), std::move(order));
  return d;
}

// Gives every sink one private copy per in-neighbour, so that sinks become leaves.
inline DerivedGraph detach_sinks(const RotorGraph& g) {
  DerivedGraph d;
  std::vector<std::string> names;
  std::vector<VertexRole> roles;
  d.vertex_image.assign(g.vertex_count(), kNoVertex);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexId vid = vertex_at(v);
    if (g.is_sink(vid) && g.in_neighbors(vid).size() > 1) continue;
    d.vertex_image[v] = vertex_at(names.size());
    names.push_back(g.name(vid));
    roles.push_back(g.role(vid));
    d.vertex_origin.push_back(vid);
    d.fresh_component.push_back(kNoSlot);
  }
  std::unordered_map<std::uint64_t, VertexId> copy;
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < g.arc_count(); ++i) {
    const Arc& a = g.arc(arc_at(i));
    VertexId head = d.vertex_image[ix(a.head)];
    if (head == kNoVertex) {
      std::uint64_t key = (static_cast<std::uint64_t>(ix(a.head)) << 32) | static_cast<std::uint32_t>(a.tail);
      auto it = copy.find(key);
      if (it == copy.end()) {
        VertexId c = vertex_at(names.size());
        names.push_back(g.name(a.head) + "#" + g.name(a.tail));
        roles.push_back(VertexRole::sink);
        d.vertex_origin.push_back(a.head);
        d.fresh_component.push_back(kNoSlot);
        it = copy.emplace(key, c).first;
      }
      head = it->second;
    }
    arcs.push_back({d.vertex_image[ix(a.tail)], head});
    d.arc_origin.push_back(arc_at(i));
  }
  std::vector<std::vector<ArcId>> order(names.size());
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (d.vertex_image[v] != kNoVertex) {
      auto ord = g.rotor_order(vertex_at(v));
      order[ix(d.vertex_image[v])].assign(ord.begin(), ord.end());
    }
  d.graph = RotorGraph(std::move(names), std::move(roles), std::move(arcs), std::move(order));
  return d;
}

// One sub-graph per shadow component.
inline std::vector<DerivedGraph> split_components(const RotorGraph& g) {
  std::vector<std::size_t> label;
  std::size_t c = shadow_components(g, label);
  std::vector<DerivedGraph> parts(c);
  std::vector<VertexId> local(g.vertex_count());
  for (auto& p : parts) p.vertex_image.assign(g.vertex_count(), kNoVertex);
  std::vector<std::vector<std::string>> names(c);
  std::vector<std::vector<VertexRole>> roles(c);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    auto& p = parts[label[v]];
    local[v] = vertex_at(names[label[v]].size());
    names[label[v]].push_back(g.name(vertex_at(v)));
    roles[label[v]].push_back(g.role(vertex_at(v)));
    p.vertex_origin.push_back(vertex_at(v));
    p.fresh_component.push_back(kNoSlot);
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v) parts[label[v]].vertex_image[v] = local[v];
  std::vector<std::vector<Arc>> arcs(c);
  std::vector<ArcId> local_arc(g.arc_count());
  for (std::size_t i = 0; i < g.arc_count(); ++i) {
    const Arc& a = g.arc(arc_at(i));
    std::size_t l = label[ix(a.tail)];
    local_arc[i] = arc_at(arcs[l].size());
    arcs[l].push_back({local[ix(a.tail)], local[ix(a.head)]});
    parts[l].arc_origin.push_back(arc_at(i));
  }
  std::vector<std::vector<std::vector<ArcId>>> order(c);
  for (std::size_t l = 0; l < c; ++l) order[l].resize(names[l].size());
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    for (ArcId a : g.rotor_order(vertex_at(v))) order[label[v]][ix(local[v])].push_back(local_arc[ix(a)]);
  for (std::size_t l = 0; l < c; ++l)
    parts[l].graph = RotorGraph(std::move(names[l]), std::move(roles[l]), std::move(arcs[l]), std::move(order[l]));
  return parts;
}

}  // namespace rotor
