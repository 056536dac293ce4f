#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rotor/extended_count.hpp"
#include "rotor/game_spec.hpp"
#include "rotor/graph.hpp"
#include "rotor/return_flows.hpp"
#include "rotor/rooted.hpp"

namespace rotor {

// Number of rotor turns taking a to b at u.
inline std::size_t rotor_distance(const RotorGraph& g, VertexId u, ArcId a, ArcId b) {
  if (a == kNoArc || b == kNoArc || g.tail(a) != u || g.tail(b) != u)
    throw std::invalid_argument("rotor_distance: arcs must leave " + g.name(u));
  const std::size_t d = g.rotor_order(u).size();
  std::size_t pa = g.rotor_position(a), pb = g.rotor_position(b);
  if (pa == kNoSlot || pb == kNoSlot) throw std::invalid_argument("rotor_distance: arc missing from the rotor order");
  return (pb + d - pa) % d;
}

// 1 when b comes no later than c in the rotor orbit started at a.
inline int b_operator(const RotorGraph& g, VertexId u, ArcId a, ArcId b, ArcId c) {
  return rotor_distance(g, u, a, b) <= rotor_distance(g, u, a, c) ? 1 : 0;
}

namespace detail {

// The single arc of each neighbour slot; the graph is assumed simple at u.
inline std::vector<ArcId> slot_arcs(const RotorGraph& g, VertexId u) {
  std::vector<ArcId> out(g.out_neighbors(u).size(), kNoArc);
  for (ArcId a : g.out_arcs(u)) out[g.neighbor_slot(a)] = a;
  return out;
}

// Distance from `from` to the arc of each slot.
inline std::vector<std::size_t> slot_distances(const RotorGraph& g, VertexId u, ArcId from) {
  auto arcs = slot_arcs(g, u);
  std::vector<std::size_t> d(arcs.size());
  for (std::size_t k = 0; k < arcs.size(); ++k) d[k] = rotor_distance(g, u, from, arcs[k]);
  return d;
}

// First slot (by distance from the start arc) with the smallest value, skipping `skip`.
inline std::size_t first_argmin(std::span<const ExtendedCount> r, std::span<const std::size_t> dist,
                                std::size_t skip = kNoSlot) {
  std::size_t best = kNoSlot;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (k == skip) continue;
    if (best == kNoSlot || r[k] < r[best] || (r[k] == r[best] && dist[k] < dist[best])) best = k;
  }
  return best;
}

inline void require_simple(const RotorGraph& g) {
  if (!is_simple(g)) throw SolverRefusal("simple-graph solver needs at most one arc per neighbour");
}

}  // namespace detail

// Destination and departures at u from its return flows, without a division.
// The destination slot counts its final departure.
inline RoutineResult flows_from_return_flows_simple(const RotorGraph& g, VertexId u, ArcId start,
                                                    std::span<const ExtendedCount> r) {
  if (g.is_sink(u)) throw std::invalid_argument("flows_from_return_flows_simple: sink");
  if (r.size() != g.out_neighbors(u).size()) throw std::invalid_argument("flows_from_return_flows_simple: one value per neighbour");
  if (all_infinite_except(r, kNoSlot)) throw std::invalid_argument("flows_from_return_flows_simple: every return flow is infinite");
  auto arcs = detail::slot_arcs(g, u);
  auto dist = detail::slot_distances(g, u, start);
  std::size_t dest = detail::first_argmin(r, dist);
  RoutineResult res;
  res.last_arc = arcs[dest];
  res.flows.resize(r.size());
  for (std::size_t k = 0; k < r.size(); ++k)
    res.flows[k] = k == dest ? r[dest] : r[dest] - ExtendedCount(dist[dest] <= dist[k] ? 1 : 0);
  return res;
}

// r(u,v) = min over the other neighbours w of v of r(v,w) + B_v(rho(v), (v,u), (v,w)).
inline ExtendedCount propagate_return_flow_simple(const RotorGraph& g, const RotorConfig& c, const ReturnFlowTable& t,
                                                  VertexId u, VertexId v) {
  if (g.is_sink(v)) return ExtendedCount(1);
  std::size_t back = g.slot_of(v, u);
  if (back == kNoSlot) return ExtendedCount(1);
  auto dist = detail::slot_distances(g, v, c[v]);
  auto nb = g.out_neighbors(v);
  ExtendedCount best = ExtendedCount::infinity();
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (k == back) continue;
    ExtendedCount x = t.get(v, k) + ExtendedCount(dist[back] <= dist[k] ? 1 : 0);
    if (x < best) best = x;
  }
  return best;
}

// Fills r(z,v) for every in-neighbour z of v from the known r(v,.), with at most two
// evaluations of the minimum. Returns the destination slot of v (kNoSlot at a sink).
inline std::size_t retropropagate_simple(const RotorGraph& g, const RotorConfig& c, ReturnFlowTable& t, VertexId v,
                                         SolverCounters* counters = nullptr) {
  if (g.is_sink(v)) {
    for (VertexId z : g.in_neighbors(v)) t.set(z, g.slot_of(z, v), ExtendedCount(1));
    return kNoSlot;
  }
  auto nb = g.out_neighbors(v);
  auto r = flows_at(g, t, v);
  auto dist = detail::slot_distances(g, v, c[v]);
  if (counters) ++counters->closed_form_evaluations[ix(v)];
  std::size_t w0 = detail::first_argmin(r, dist);
  if (r[w0].is_infinite()) throw SolverRefusal("simple retropropagation: every return flow at " + g.name(v) + " is infinite");
  for (std::size_t k = 0; k < nb.size(); ++k) {
    std::size_t back = g.reverse_slot(v, k);
    if (back == kNoSlot || k == w0) continue;
    t.set(nb[k].head, back, r[w0] + ExtendedCount(dist[k] <= dist[w0] ? 1 : 0));
  }
  std::size_t back0 = g.reverse_slot(v, w0);
  if (back0 != kNoSlot) {
    if (counters) ++counters->closed_form_evaluations[ix(v)];
    ExtendedCount best = ExtendedCount::infinity();
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (k == w0) continue;
      ExtendedCount x = r[k] + ExtendedCount(dist[w0] <= dist[k] ? 1 : 0);
      if (x < best) best = x;
    }
    t.set(nb[w0].head, back0, best);
  }
  for (VertexId z : g.in_neighbors(v))
    if (g.slot_of(v, z) == kNoSlot) t.set(z, g.slot_of(z, v), ExtendedCount(1));
  return w0;
}

// Destination forest of a stopping simple forest-like graph.
inline DestinationResult destination_forest_simple(const RotorGraph& g, const RotorConfig& c,
                                                   VertexId root = vertex_at(0)) {
  require_valid(g);
  check_config(g, c);
  detail::require_simple(g);
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
    if (k != kNoSlot) out.table.set(p, k, propagate_return_flow_simple(g, c, out.table, p, v));
  }
  for (VertexId u : ro.order) {
    std::size_t dest = retropropagate_simple(g, c, out.table, u, &out.counters);
    if (dest == kNoSlot) continue;
    out.at_vertex[ix(u)] = flows_from_return_flows_simple(g, u, c[u], flows_at(g, out.table, u));
    out.destination.set(u, out.at_vertex[ix(u)].last_arc);
  }
  out.exits = exit_pattern_from_acyclic(g, out.destination);
  return out;
}

// Optimal binary value and return flow of every neighbour pair, for every start at once.
struct AllVerticesSolution {
  std::vector<int> value;  // per vertex
  std::vector<std::optional<int>> pair_value;  // by pair id
  ReturnFlowTable table;
  SolverCounters counters;
};

namespace detail {

struct EdgeEval {
  int value = 0;
  ExtendedCount return_flow;
};

inline int preferred(const GameSpec& game, VertexId v) { return game.is_min(v) ? 0 : 1; }

}  // namespace detail

// Binary game on a stopping simple forest-like graph; MIN vertices are handled with 0 and 1 swapped.
inline AllVerticesSolution one_player_binary_all_vertices(const GameSpec& game) {
  validate_game(game);
  const RotorGraph& g = game.graph;
  detail::require_simple(g);
  if (!is_tree_like(g) && !is_forest_like(g)) throw SolverRefusal("game solver needs a tree-like graph");
  if (!is_stopping(g)) throw SolverRefusal("simple game solver needs a stopping graph");
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (g.is_sink(vertex_at(v)) && game.sink_value[v] > 1) throw InvalidInstance("binary solver needs sink values 0 or 1");
  const std::size_t n = g.vertex_count();
  AllVerticesSolution sol{std::vector<int>(n, 0), std::vector<std::optional<int>>(g.pair_count()), ReturnFlowTable(g),
                          SolverCounters(n)};
  auto sink_bit = [&](VertexId v) { return game.sink_value[ix(v)] >= 1 ? 1 : 0; };
  auto value_of = [&](VertexId v, std::size_t k) { return *sol.pair_value[g.pair_id(v, k)]; };

  // Value and return flow of (u,v) from v's other neighbours; `back` is the slot of u at v.
  auto evaluate = [&](VertexId v, std::size_t back, std::span<const ExtendedCount> r,
                      std::span<const std::size_t> dist, bool has_back) -> detail::EdgeEval {
    std::size_t m = detail::first_argmin(r, dist, back);
    if (m == kNoSlot || r[m].is_infinite()) return {0, has_back ? ExtendedCount::infinity() : ExtendedCount(1)};
    if (!game.owned(v)) {
      ExtendedCount rf = back == kNoSlot ? ExtendedCount(1) : r[m] + ExtendedCount(dist[back] <= dist[m] ? 1 : 0);
      return {value_of(v, m), has_back ? rf : ExtendedCount(1)};
    }
    int pref = detail::preferred(game, v);
    for (std::size_t k = 0; k < r.size(); ++k)
      if (k != back && r[k] == r[m] && value_of(v, k) == pref) return {pref, has_back ? r[m] : ExtendedCount(1)};
    return {1 - pref, has_back ? r[m] + ExtendedCount(1) : ExtendedCount(1)};
  };
  auto record = [&](VertexId u, std::size_t k, detail::EdgeEval e) {
    sol.table.set(u, k, e.return_flow);
    sol.pair_value[g.pair_id(u, k)] = e.value;
  };
  auto start_arc = [&](VertexId v) { return game.owned(v) ? g.rotor_order(v)[0] : game.fixed[v]; };

  auto ro = bfs_order(g, vertex_at(0), true);
  for (std::size_t i = ro.order.size(); i-- > 0;) {
    VertexId v = ro.order[i];
    VertexId p = ro.parent[ix(v)];
    if (p == kNoVertex) continue;
    std::size_t k = g.slot_of(p, v);
    if (k == kNoSlot) continue;
    if (g.is_sink(v)) {
      record(p, k, {sink_bit(v), ExtendedCount(1)});
      continue;
    }
    std::size_t back = g.slot_of(v, p);
    auto r = back == kNoSlot ? flows_at(g, sol.table, v) : flows_at(g, sol.table, v, back);
    auto dist = detail::slot_distances(g, v, start_arc(v));
    record(p, k, evaluate(v, back, r, dist, back != kNoSlot));
  }

  for (VertexId v : ro.order) {
    if (g.is_sink(v)) {
      sol.value[ix(v)] = sink_bit(v);
      for (VertexId z : g.in_neighbors(v)) record(z, g.slot_of(z, v), {sink_bit(v), ExtendedCount(1)});
      continue;
    }
    auto nb = g.out_neighbors(v);
    auto r = flows_at(g, sol.table, v);
    auto dist = detail::slot_distances(g, v, start_arc(v));
    ++sol.counters.closed_form_evaluations[ix(v)];
    detail::EdgeEval whole = evaluate(v, kNoSlot, r, dist, true);
    sol.value[ix(v)] = whole.value;
    // The slot whose removal can change the outcome: the first minimum, or for an owned
    // vertex a minimal slot with the preferred value when there is one.
    std::size_t pivot = detail::first_argmin(r, dist);
    if (game.owned(v))
      for (std::size_t k = 0; k < nb.size(); ++k)
        if (r[k] == r[pivot] && value_of(v, k) == detail::preferred(game, v)) {
          pivot = k;
          break;
        }
    for (std::size_t k = 0; k < nb.size(); ++k) {
      std::size_t back = g.reverse_slot(v, k);
      if (back == kNoSlot || k == pivot) continue;
      detail::EdgeEval e;
      if (!game.owned(v)) {
        e = {value_of(v, pivot), r[pivot] + ExtendedCount(dist[k] <= dist[pivot] ? 1 : 0)};
      } else {
        e = {whole.value, whole.value == detail::preferred(game, v) ? r[pivot] : r[pivot] + ExtendedCount(1)};
      }
      record(nb[k].head, back, e);
    }
    std::size_t back0 = g.reverse_slot(v, pivot);
    if (back0 != kNoSlot) {
      ++sol.counters.closed_form_evaluations[ix(v)];
      record(nb[pivot].head, back0, evaluate(v, pivot, r, dist, true));
    }
    for (VertexId z : g.in_neighbors(v)) {
      if (g.slot_of(v, z) != kNoSlot) continue;
      record(z, g.slot_of(z, v), {whole.value, ExtendedCount(1)});
    }
  }
  return sol;
}

// MAX strategy pointing every owned vertex at its neighbour towards u0 when it can.
inline Strategy sigma_max(const GameSpec& game, VertexId u0) {
  const RotorGraph& g = game.graph;
  Strategy s(g.vertex_count());
  auto ro = bfs_order(g, u0, true);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexId vid = vertex_at(v);
    if (!game.owned(vid)) continue;
    VertexId p = ro.parent[v];
    ArcId pick = g.rotor_order(vid)[0];
    if (p != kNoVertex)
      for (ArcId a : g.out_arcs(vid))
        if (g.head(a) == p) {
          pick = a;
          break;
        }
    s.set(vid, pick);
  }
  return s;
}

// Access flows on the pairs pointing away from u0, with the return flows under sigma_max.
struct AccessFlowTable {
  VertexId root = kNoVertex;
  std::vector<std::optional<ExtendedCount>> access;  // by pair id, pairs away from the root
  ReturnFlowTable return_flows;                      // under sigma_max, pairs away from the root
  Strategy strategy;                                 // sigma_max

  std::optional<ExtendedCount> at(VertexId u, VertexId v) const {
    const RotorGraph& g = return_flows.graph();
    std::size_t k = g.slot_of(u, v);
    if (k == kNoSlot) return std::nullopt;
    return access[g.pair_id(u, k)];
  }
};

namespace detail {

inline void require_one_player_simple(const GameSpec& game) {
  validate_game(game);
  require_simple(game.graph);
  if (!is_tree_like(game.graph)) throw SolverRefusal("game solver needs a tree-like graph");
  if (!is_stopping(game.graph)) throw SolverRefusal("simple game solver needs a stopping graph");
  for (std::size_t v = 0; v < game.graph.vertex_count(); ++v)
    if (game.is_min(vertex_at(v))) throw InvalidInstance("one-player solver: vertex " + game.graph.name(vertex_at(v)) + " belongs to MIN");
}

}  // namespace detail

// For every arc (v,w) pointing away from u0: the largest number of crossings of (v,w), over
// MAX strategies, when w is made to send the particle straight back.
inline AccessFlowTable access_flows(const GameSpec& game, VertexId u0, SolverCounters* counters = nullptr) {
  detail::require_one_player_simple(game);
  const RotorGraph& g = game.graph;
  AccessFlowTable out{u0, std::vector<std::optional<ExtendedCount>>(g.pair_count()), ReturnFlowTable(g),
                      sigma_max(game, u0)};
  if (g.is_sink(u0)) return out;
  RotorConfig c = combine(game, out.strategy, Strategy());
  auto ro = bfs_order(g, u0);
  for (std::size_t i = ro.order.size(); i-- > 1;) {
    VertexId v = ro.order[i];
    VertexId p = ro.parent[ix(v)];
    std::size_t k = g.slot_of(p, v);
    if (k != kNoSlot) out.return_flows.set(p, k, propagate_return_flow_simple(g, c, out.return_flows, p, v));
  }
  // Crossings of (v,w_i): the minimum over the other slots x of val_x - B(rho(v), x, w_i), or
  // of val_x when v is owned and points at w_i. Two evaluations per vertex.
  for (VertexId v : ro.order) {
    if (g.is_sink(v)) continue;
    VertexId p = ro.parent[ix(v)];
    auto nb = g.out_neighbors(v);
    std::size_t back = p == kNoVertex ? kNoSlot : g.slot_of(v, p);
    ExtendedCount entry = ExtendedCount::infinity();  // the root is always reached
    if (p != kNoVertex) {
      std::size_t in = g.slot_of(p, v);
      entry = in == kNoSlot ? ExtendedCount(0) : *out.access[g.pair_id(p, in)];
    }
    std::vector<ExtendedCount> val(nb.size(), ExtendedCount::infinity());
    for (std::size_t k = 0; k < nb.size(); ++k) val[k] = k == back ? entry : out.return_flows.get(v, k);
    auto dist = detail::slot_distances(g, v, game.owned(v) ? g.rotor_order(v)[0] : c[v]);
    const bool owned = game.owned(v);
    auto crossings = [&](std::size_t x, std::size_t i) {
      return owned ? val[x] : val[x] - ExtendedCount(dist[x] <= dist[i] ? 1 : 0);
    };
    auto set = [&](std::size_t i, ExtendedCount a) { out.access[g.pair_id(v, i)] = std::move(a); };
    if (entry == ExtendedCount(0)) {
      for (std::size_t k = 0; k < nb.size(); ++k)
        if (k != back) set(k, ExtendedCount(0));
      continue;
    }
    if (counters) ++counters->closed_form_evaluations[ix(v)];
    std::size_t x0 = detail::first_argmin(val, dist);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (k != back && k != x0) set(k, crossings(x0, k));
    if (x0 != back) {
      if (counters) ++counters->closed_form_evaluations[ix(v)];
      ExtendedCount best = ExtendedCount::infinity();
      for (std::size_t x = 0; x < nb.size(); ++x) {
        if (x == x0) continue;
        ExtendedCount a = crossings(x, x0);
        if (a < best) best = a;
      }
      set(x0, best);
    }
  }
  return out;
}

struct SimpleIntegerSolution {
  std::int64_t value = 0;
  VertexId best_sink = kNoVertex;
  AccessFlowTable access;
};

// Largest sink value among the sinks some MAX strategy reaches from u0.
inline SimpleIntegerSolution one_player_integer_simple(const GameSpec& game, VertexId u0) {
  SimpleIntegerSolution s{0, kNoVertex, access_flows(game, u0)};
  const RotorGraph& g = game.graph;
  if (g.is_sink(u0)) {
    s.value = game.sink_value[ix(u0)];
    s.best_sink = u0;
    return s;
  }
  auto ro = bfs_order(g, u0);
  for (VertexId v : ro.order) {
    if (!g.is_sink(v) || v == u0) continue;
    auto a = s.access.at(ro.parent[ix(v)], v);
    if (!a || *a == ExtendedCount(0)) continue;
    if (s.best_sink == kNoVertex || game.sink_value[ix(v)] > s.value) {
      s.value = game.sink_value[ix(v)];
      s.best_sink = v;
    }
  }
  return s;
}

}  // namespace rotor
