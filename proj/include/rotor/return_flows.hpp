#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "rotor/extended_count.hpp"
#include "rotor/graph.hpp"
#include "rotor/rooted.hpp"
#include "rotor/walk.hpp"

namespace rotor {

// Outcome of the rotor process at one vertex: the arc used last and the number of
// departures towards each out-neighbour slot, the final one included.
struct RoutineResult {
  ArcId last_arc = kNoArc;
  std::vector<ExtendedCount> flows;
};

struct SolverCounters {
  std::vector<std::uint32_t> routine_calls;    // per vertex
  std::vector<std::uint32_t> closed_form_evaluations;  // per vertex, simple-graph solver
  explicit SolverCounters(std::size_t n = 0) : routine_calls(n, 0), closed_form_evaluations(n, 0) {}
  std::uint64_t total_routine_calls() const {
    std::uint64_t s = 0;
    for (auto c : routine_calls) s += c;
    return s;
  }
  std::uint32_t max_routine_calls() const {
    return routine_calls.empty() ? 0 : *std::max_element(routine_calls.begin(), routine_calls.end());
  }
  std::uint32_t max_closed_form_evaluations() const {
    return closed_form_evaluations.empty() ? 0 : *std::max_element(closed_form_evaluations.begin(), closed_form_evaluations.end());
  }
};

namespace detail {

inline void check_routine_input(const RotorGraph& g, VertexId u, ArcId start, std::span<const ExtendedCount> r) {
  if (g.is_sink(u)) throw std::invalid_argument("routine at a sink");
  if (r.size() != g.out_neighbors(u).size()) throw std::invalid_argument("routine: one return flow per neighbour expected");
  if (start == kNoArc || g.tail(start) != u) throw std::invalid_argument("routine: start arc does not leave the vertex");
  bool finite = false;
  for (const auto& x : r) {
    if (x == ExtendedCount(0)) throw std::invalid_argument("routine: return flow 0 at a plain neighbour");
    finite = finite || x.is_finite();
  }
  if (!finite) throw std::invalid_argument("routine: every return flow is infinite");
}

}  // namespace detail

// Direct simulation: one rotor step per iteration.
inline RoutineResult revolving_routine(const RotorGraph& g, VertexId u, ArcId start, std::span<const ExtendedCount> r) {
  detail::check_routine_input(g, u, start, r);
  std::vector<ExtendedCount> left(r.begin(), r.end());
  RoutineResult res;
  res.flows.assign(r.size(), ExtendedCount(0));
  ArcId a = start;
  for (;;) {
    std::size_t k = g.neighbor_slot(a);
    if (left[k] <= ExtendedCount(1)) break;
    --left[k];
    ++res.flows[k];
    a = g.theta(a);
  }
  res.last_arc = a;
  ++res.flows[g.neighbor_slot(a)];
  return res;
}

// Skips whole rotor turns first, then finishes the last partial turn step by step.
inline RoutineResult improved_revolving_routine(const RotorGraph& g, VertexId u, ArcId start,
                                                std::span<const ExtendedCount> r) {
  detail::check_routine_input(g, u, start, r);
  auto nb = g.out_neighbors(u);
  std::optional<ExtendedCount> turns;
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (r[k].is_infinite()) continue;
    ExtendedCount q = (r[k] - ExtendedCount(1)) / ExtendedCount(nb[k].multiplicity);
    if (!turns || q < *turns) turns = q;
  }
  std::vector<ExtendedCount> left(nb.size());
  std::vector<std::uint64_t> steps(nb.size(), 0);
  for (std::size_t k = 0; k < nb.size(); ++k) left[k] = r[k] - *turns * ExtendedCount(nb[k].multiplicity);
  ArcId a = start;
  for (;;) {
    std::size_t k = g.neighbor_slot(a);
    if (left[k] <= ExtendedCount(1)) break;
    --left[k];
    ++steps[k];
    a = g.theta(a);
  }
  RoutineResult res;
  res.last_arc = a;
  res.flows.resize(nb.size());
  for (std::size_t k = 0; k < nb.size(); ++k)
    res.flows[k] = *turns * ExtendedCount(nb[k].multiplicity) + ExtendedCount(steps[k]);
  ++res.flows[g.neighbor_slot(a)];
  return res;
}

// Return flows indexed by directed neighbour pair.
class ReturnFlowTable {
 public:
  ReturnFlowTable() = default;
  explicit ReturnFlowTable(const RotorGraph& g) : graph_(&g), entries_(g.pair_count()) {}

  bool has(VertexId u, std::size_t slot) const { return entries_[graph_->pair_id(u, slot)].has_value(); }
  const ExtendedCount& get(VertexId u, std::size_t slot) const {
    const auto& e = entries_[graph_->pair_id(u, slot)];
    if (!e) throw std::logic_error("return flow of " + graph_->name(u) + " not computed");
    return *e;
  }
  void set(VertexId u, std::size_t slot, ExtendedCount value) { entries_[graph_->pair_id(u, slot)] = std::move(value); }

  std::optional<ExtendedCount> at(VertexId u, VertexId v) const {
    std::size_t k = graph_->slot_of(u, v);
    if (k == kNoSlot) return std::nullopt;
    return entries_[graph_->pair_id(u, k)];
  }
  std::size_t size() const { return entries_.size(); }
  const std::optional<ExtendedCount>& by_pair(std::size_t id) const { return entries_[id]; }
  const RotorGraph& graph() const { return *graph_; }

 private:
  const RotorGraph* graph_ = nullptr;
  std::vector<std::optional<ExtendedCount>> entries_;
};

// Return flows at u, one per slot, with an optional slot forced to infinity.
inline std::vector<ExtendedCount> flows_at(const RotorGraph& g, const ReturnFlowTable& t, VertexId u,
                                           std::size_t infinite_slot = kNoSlot) {
  auto nb = g.out_neighbors(u);
  std::vector<ExtendedCount> r(nb.size());
  for (std::size_t k = 0; k < nb.size(); ++k) r[k] = k == infinite_slot ? ExtendedCount::infinity() : t.get(u, k);
  return r;
}

inline bool all_infinite_except(std::span<const ExtendedCount> r, std::size_t skip) {
  for (std::size_t k = 0; k < r.size(); ++k)
    if (k != skip && r[k].is_finite()) return false;
  return true;
}

// r(u,v) from the return flows of v towards its other neighbours. The caller's vertex u acts
// as a neighbour that always sends the particle back, so it counts as infinite.
inline ExtendedCount propagate_return_flow(const RotorGraph& g, const RotorConfig& c, const ReturnFlowTable& t, VertexId u,
                                           VertexId v, SolverCounters* counters = nullptr) {
  if (g.is_sink(v)) return ExtendedCount(1);
  std::size_t back = g.slot_of(v, u);
  if (back == kNoSlot) return ExtendedCount(1);
  auto r = flows_at(g, t, v, back);
  if (all_infinite_except(r, back)) return ExtendedCount::infinity();
  if (counters) ++counters->routine_calls[ix(v)];
  auto res = improved_revolving_routine(g, v, c[v], r);
  return res.flows[back] + ExtendedCount(1);
}

// Fills r(w,u) for every in-neighbour w of u, given every r(u,.) already known.
// Returns the routine outcome at u (empty for a sink).
inline RoutineResult retropropagate(const RotorGraph& g, const RotorConfig& c, ReturnFlowTable& t, VertexId u,
                                    SolverCounters* counters = nullptr) {
  RoutineResult res;
  if (g.is_sink(u)) {
    for (VertexId w : g.in_neighbors(u)) t.set(w, g.slot_of(w, u), ExtendedCount(1));
    return res;
  }
  auto r = flows_at(g, t, u);
  if (counters) ++counters->routine_calls[ix(u)];
  res = improved_revolving_routine(g, u, c[u], r);
  std::size_t dest = g.neighbor_slot(res.last_arc);
  for (VertexId w : g.in_neighbors(u)) {
    std::size_t k = g.slot_of(u, w);
    std::size_t back = g.slot_of(w, u);
    if (k == kNoSlot) {
      t.set(w, back, ExtendedCount(1));
    } else if (k != dest) {
      t.set(w, back, res.flows[k] + ExtendedCount(1));
    } else {
      t.set(w, back, propagate_return_flow(g, c, t, w, u, counters));
    }
  }
  return res;
}

struct DestinationResult {
  RotorConfig destination;  // last arc used from each plain vertex
  std::vector<VertexId> exits;
  ReturnFlowTable table;
  std::vector<RoutineResult> at_vertex;  // flows of the walk started at each vertex
  SolverCounters counters;
};

// Full destination forest and exit pattern of a stopping forest-like graph.
inline DestinationResult compute_destination_forest(const RotorGraph& g, const RotorConfig& c,
                                                    VertexId root = vertex_at(0)) {
  require_valid(g);
  check_config(g, c);
  if (!is_forest_like(g)) throw SolverRefusal("destination solver needs a tree-like graph");
  if (!is_stopping(g)) throw SolverRefusal("destination solver needs a stopping graph");
  const std::size_t n = g.vertex_count();
  DestinationResult out{RotorConfig(n), {}, ReturnFlowTable(g), std::vector<RoutineResult>(n), SolverCounters(n)};
  auto ro = bfs_order(g, root, true);
  for (std::size_t i = ro.order.size(); i-- > 0;) {
    VertexId v = ro.order[i];
    VertexId p = ro.parent[ix(v)];
    if (p == kNoVertex) continue;
    std::size_t k = g.slot_of(p, v);
    if (k == kNoSlot) continue;
    out.table.set(p, k, propagate_return_flow(g, c, out.table, p, v, &out.counters));
  }
  for (VertexId u : ro.order) {
    out.at_vertex[ix(u)] = retropropagate(g, c, out.table, u, &out.counters);
    if (!g.is_sink(u)) out.destination.set(u, out.at_vertex[ix(u)].last_arc);
  }
  out.exits = exit_pattern_from_acyclic(g, out.destination);
  return out;
}

// Number of departures along each neighbour pair during the walk from start,
// derived from a complete return-flow table. Indexed by pair id.
inline std::vector<ExtendedCount> walk_flows(const RotorGraph& g, const RotorConfig& c, const ReturnFlowTable& t,
                                             VertexId start) {
  std::vector<ExtendedCount> flow(g.pair_count(), ExtendedCount(0));
  if (g.is_sink(start)) return flow;
  auto ro = bfs_order(g, start);
  for (VertexId v : ro.order) {
    if (g.is_sink(v)) continue;
    VertexId p = ro.parent[ix(v)];
    auto r = flows_at(g, t, v);
    if (p != kNoVertex) {
      std::size_t in = g.slot_of(p, v);
      ExtendedCount entries = in == kNoSlot ? ExtendedCount(0) : flow[g.pair_id(p, in)];
      if (entries == ExtendedCount(0)) continue;
      std::size_t back = g.slot_of(v, p);
      if (back != kNoSlot) r[back] = entries;
    }
    auto res = improved_revolving_routine(g, v, c[v], r);
    for (std::size_t k = 0; k < r.size(); ++k) flow[g.pair_id(v, k)] = res.flows[k];
  }
  return flow;
}

// u together with the part of the shadow behind v; u keeps one arc to v that maps to itself.
struct Subtree {
  RotorGraph graph;
  RotorConfig config;
  VertexId root = kNoVertex;  // image of u
  VertexId child = kNoVertex;  // image of v
  ArcId root_arc = kNoArc;
  std::vector<VertexId> origin;
};

inline Subtree build_subtree(const RotorGraph& g, const RotorConfig& c, VertexId u, VertexId v) {
  std::size_t k = g.slot_of(u, v);
  if (k == kNoSlot) throw std::invalid_argument("build_subtree: no arc from u to v");
  const std::size_t n = g.vertex_count();
  std::vector<VertexId> image(n, kNoVertex);
  Subtree s;
  std::vector<std::string> names;
  std::vector<VertexRole> roles;
  auto add = [&](VertexId x) {
    image[ix(x)] = vertex_at(names.size());
    names.push_back(g.name(x));
    roles.push_back(g.role(x));
    s.origin.push_back(x);
  };
  add(u);
  add(v);
  std::vector<VertexId> stack{v};
  while (!stack.empty()) {
    VertexId x = stack.back();
    stack.pop_back();
    for (VertexId w : g.shadow_neighbors(x))
      if (image[ix(w)] == kNoVertex) {
        add(w);
        stack.push_back(w);
      }
  }
  std::vector<Arc> arcs;
  std::vector<ArcId> new_id(g.arc_count(), kNoArc);
  ArcId keep = kNoArc;
  for (ArcId a : g.rotor_order(u))
    if (g.head(a) == v) {
      keep = a;
      break;
    }
  if (keep == kNoArc) keep = g.out_arcs(u)[0];
  for (std::size_t i = 0; i < g.arc_count(); ++i) {
    const Arc& a = g.arc(arc_at(i));
    if (image[ix(a.tail)] == kNoVertex || image[ix(a.head)] == kNoVertex) continue;
    if (a.tail == u && arc_at(i) != keep) continue;
    new_id[i] = arc_at(arcs.size());
    arcs.push_back({image[ix(a.tail)], image[ix(a.head)]});
  }
  std::vector<std::vector<ArcId>> order(names.size());
  for (std::size_t i = 0; i < names.size(); ++i)
    for (ArcId a : g.rotor_order(s.origin[i]))
      if (new_id[ix(a)] != kNoArc) order[i].push_back(new_id[ix(a)]);
  s.graph = RotorGraph(std::move(names), std::move(roles), std::move(arcs), std::move(order));
  s.config = RotorConfig(s.graph.vertex_count());
  for (std::size_t i = 0; i < s.origin.size(); ++i) {
    VertexId x = s.origin[i];
    if (g.is_sink(x)) continue;
    s.config.set(vertex_at(i), i == 0 ? new_id[ix(keep)] : new_id[ix(c[x])]);
  }
  s.root = vertex_at(0);
  s.child = vertex_at(1);
  s.root_arc = new_id[ix(keep)];
  return s;
}

// Crossings of u->v during the maximal walk from u in the subtree, by simulation.
inline ExtendedCount return_flow_oracle(const RotorGraph& g, const RotorConfig& c, VertexId u, VertexId v,
                                        std::uint64_t step_cap = 200'000'000) {
  if (g.is_sink(u)) return ExtendedCount(0);
  Subtree s = build_subtree(g, c, u, v);
  WalkOptions opt;
  opt.record_flows = true;
  opt.step_cap = step_cap;
  auto w = run_maximal_walk(s.graph, s.config, s.root, opt);
  if (w.status == WalkStatus::cap_hit) throw CapExceeded("return_flow_oracle: step cap reached");
  if (w.status == WalkStatus::trapped) {
    auto comp = sink_components(s.graph);
    if (comp[ix(s.root)] != kNoSlot) return ExtendedCount::infinity();
  }
  return ExtendedCount(w.arc_flows[ix(s.root_arc)]);
}

}  // namespace rotor
