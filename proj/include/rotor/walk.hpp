#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "rotor/extended_count.hpp"
#include "rotor/graph.hpp"

namespace rotor {

// One out-arc per plain vertex; kNoArc marks an unset entry (and every sink).
class RotorConfig {
 public:
  RotorConfig() = default;
  explicit RotorConfig(std::size_t vertex_count) : arcs_(vertex_count, kNoArc) {}

  std::size_t size() const { return arcs_.size(); }
  ArcId operator[](VertexId v) const { return arcs_[ix(v)]; }
  bool has(VertexId v) const { return arcs_[ix(v)] != kNoArc; }
  void set(VertexId v, ArcId a) { arcs_[ix(v)] = a; }

  friend bool operator==(const RotorConfig&, const RotorConfig&) = default;

 private:
  std::vector<ArcId> arcs_;
};

// Config pointing every plain vertex at the first arc of its rotor order.
inline RotorConfig first_arc_config(const RotorGraph& g) {
  RotorConfig c(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (!g.is_sink(vertex_at(v)) && !g.rotor_order(vertex_at(v)).empty()) c.set(vertex_at(v), g.rotor_order(vertex_at(v))[0]);
  return c;
}

inline void check_config(const RotorGraph& g, const RotorConfig& c) {
  if (c.size() != g.vertex_count()) throw InvalidInstance("config size does not match the graph");
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexId vid = vertex_at(v);
    if (g.is_sink(vid)) continue;
    if (!c.has(vid)) throw InvalidInstance("config has no arc at vertex " + g.name(vid));
    if (ix(c[vid]) >= g.arc_count() || g.tail(c[vid]) != vid)
      throw InvalidInstance("config arc at " + g.name(vid) + " does not leave that vertex");
  }
}

struct WalkState {
  RotorConfig config;
  VertexId position;
};

// Move along the current arc, then turn the rotor.
inline void route_in_place(const RotorGraph& g, RotorConfig& c, VertexId& pos) {
  if (g.is_sink(pos)) throw std::invalid_argument("routing step from sink " + g.name(pos));
  ArcId a = c[pos];
  c.set(pos, g.theta(a));
  pos = g.head(a);
}

inline WalkState routing_step(const RotorGraph& g, WalkState s) {
  route_in_place(g, s.config, s.position);
  return s;
}

enum class WalkStatus { reached_sink, trapped, cap_hit };

struct WalkOptions {
  std::optional<std::uint64_t> step_cap;
  bool record_flows = false;
  bool record_trace = false;
  bool detect_traps = true;  // stop on entering a closed component
  const std::vector<std::size_t>* traps = nullptr;  // precomputed sink_components(), optional
  std::function<void(VertexId)> on_visit;
};

struct WalkOutcome {
  RotorConfig final_config;
  VertexId position = kNoVertex;
  WalkStatus status = WalkStatus::cap_hit;
  std::optional<VertexId> exit;  // the sink reached
  ExtendedCount steps;
  std::vector<std::uint64_t> arc_flows;  // per arc, when recorded
  std::vector<VertexId> trace;           // visited vertices including start and end, when recorded
};

// Upper bound on a terminating walk: product of out-degrees times |V|.
inline ExtendedCount walk_step_bound(const RotorGraph& g) {
  BigInt b = 1;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (!g.is_sink(vertex_at(v)) && g.out_degree(vertex_at(v)) > 0) b *= g.out_degree(vertex_at(v));
  b *= g.vertex_count();
  return ExtendedCount(b);
}

inline WalkOutcome run_maximal_walk(const RotorGraph& g, RotorConfig config, VertexId start,
                                    const WalkOptions& opt = {}) {
  WalkOutcome out;
  std::vector<std::size_t> own_traps;
  const std::vector<std::size_t>* traps = opt.traps;
  if (opt.detect_traps && !traps) traps = &(own_traps = sink_components(g));
  if (opt.record_flows) out.arc_flows.assign(g.arc_count(), 0);
  std::uint64_t cap = opt.step_cap.value_or(std::numeric_limits<std::uint64_t>::max());
  std::uint64_t steps = 0;
  VertexId pos = start;
  auto visit = [&](VertexId v) {
    if (opt.record_trace) out.trace.push_back(v);
    if (opt.on_visit) opt.on_visit(v);
  };
  visit(pos);
  for (;;) {
    if (g.is_sink(pos)) {
      out.status = WalkStatus::reached_sink;
      out.exit = pos;
      break;
    }
    if (traps && (*traps)[ix(pos)] != kNoSlot) {
      out.status = WalkStatus::trapped;
      break;
    }
    if (steps == cap) {
      out.status = WalkStatus::cap_hit;
      break;
    }
    ArcId a = config[pos];
    if (opt.record_flows) ++out.arc_flows[ix(a)];
    config.set(pos, g.theta(a));
    pos = g.head(a);
    ++steps;
    visit(pos);
  }
  out.final_config = std::move(config);
  out.position = pos;
  out.steps = ExtendedCount(steps);
  return out;
}

// Some cycle of the config graph, as the list of its vertices in arc order.
inline std::optional<std::vector<VertexId>> find_cycle(const RotorGraph& g, const RotorConfig& c) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint32_t> mark(n, 0);  // 0 new, k: visited in round k
  std::uint32_t round = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (mark[s] || g.is_sink(vertex_at(s))) continue;
    ++round;
    VertexId v = vertex_at(s);
    while (!g.is_sink(v) && mark[ix(v)] == 0) {
      mark[ix(v)] = round;
      v = g.head(c[v]);
    }
    if (!g.is_sink(v) && mark[ix(v)] == round) {
      std::vector<VertexId> cyc{v};
      for (VertexId w = g.head(c[v]); w != v; w = g.head(c[w])) cyc.push_back(w);
      return cyc;
    }
  }
  return std::nullopt;
}

// Every cycle of the config graph (they are vertex-disjoint).
inline std::vector<std::vector<VertexId>> all_cycles(const RotorGraph& g, const RotorConfig& c) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t round = 0;
  std::vector<std::vector<VertexId>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (mark[s] || g.is_sink(vertex_at(s))) continue;
    ++round;
    VertexId v = vertex_at(s);
    while (!g.is_sink(v) && mark[ix(v)] == 0) {
      mark[ix(v)] = round;
      v = g.head(c[v]);
    }
    if (!g.is_sink(v) && mark[ix(v)] == round) {
      std::vector<VertexId> cyc{v};
      for (VertexId w = g.head(c[v]); w != v; w = g.head(c[w])) cyc.push_back(w);
      out.push_back(std::move(cyc));
    }
  }
  return out;
}

// Turns the rotor of every vertex of a cycle of the config graph.
inline RotorConfig cycle_push(const RotorGraph& g, RotorConfig c, const std::vector<VertexId>& cycle) {
  if (cycle.empty()) throw std::invalid_argument("cycle_push: empty cycle");
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    VertexId u = cycle[i], next = cycle[(i + 1) % cycle.size()];
    if (g.is_sink(u) || !c.has(u) || g.head(c[u]) != next)
      throw std::invalid_argument("cycle_push: not a cycle of the config graph");
  }
  for (VertexId u : cycle) c.set(u, g.theta(c[u]));
  return c;
}

enum class PushPolicy { first_found, lowest_vertex, random };

struct PushOutcome {
  RotorConfig forest;
  std::uint64_t pushes = 0;
  bool cap_hit = false;
};

// Pushes cycles until the config graph is acyclic. first_found pushes every cycle found
// in one sweep, lowest_vertex the cycle holding the smallest vertex id, random a uniform one.
inline PushOutcome destination_forest_by_pushing(const RotorGraph& g, RotorConfig c,
                                                 PushPolicy policy = PushPolicy::first_found,
                                                 std::uint64_t seed = 0,
                                                 std::optional<std::uint64_t> push_cap = std::nullopt) {
  std::uint64_t cap;
  if (push_cap) {
    cap = *push_cap;
  } else {
    auto bound = walk_step_bound(g).to_u64();
    cap = bound ? *bound : std::numeric_limits<std::uint64_t>::max();
  }
  std::mt19937_64 rng(seed);
  PushOutcome out;
  for (;;) {
    auto cycles = all_cycles(g, c);
    if (cycles.empty()) break;
    if (policy == PushPolicy::first_found) {
      for (const auto& cyc : cycles) {
        if (out.pushes == cap) break;
        for (VertexId u : cyc) c.set(u, g.theta(c[u]));
        ++out.pushes;
      }
    } else {
      std::size_t pick = 0;
      if (policy == PushPolicy::lowest_vertex) {
        std::size_t best = kNoSlot;
        for (std::size_t i = 0; i < cycles.size(); ++i) {
          std::size_t lo = ix(*std::min_element(cycles[i].begin(), cycles[i].end()));
          if (lo < best) best = lo, pick = i;
        }
      } else {
        pick = static_cast<std::size_t>(rng() % cycles.size());
      }
      if (out.pushes < cap) {
        for (VertexId u : cycles[pick]) c.set(u, g.theta(c[u]));
        ++out.pushes;
      }
    }
    if (out.pushes == cap && !all_cycles(g, c).empty()) {
      out.cap_hit = true;
      break;
    }
  }
  out.forest = std::move(c);
  return out;
}

// Sink reached from each vertex along the config arcs; the config graph must be acyclic.
inline std::vector<VertexId> exit_pattern_from_acyclic(const RotorGraph& g, const RotorConfig& c) {
  const std::size_t n = g.vertex_count();
  std::vector<VertexId> exit(n, kNoVertex);
  std::vector<std::uint8_t> state(n, 0);  // 1 on current path
  std::vector<VertexId> path;
  for (std::size_t s = 0; s < n; ++s) {
    VertexId v = vertex_at(s);
    while (exit[ix(v)] == kNoVertex && !g.is_sink(v)) {
      if (state[ix(v)] == 1) throw std::invalid_argument("exit_pattern_from_acyclic: config graph has a cycle");
      state[ix(v)] = 1;
      path.push_back(v);
      v = g.head(c[v]);
    }
    VertexId e = g.is_sink(v) ? v : exit[ix(v)];
    if (g.is_sink(v)) exit[ix(v)] = v;
    for (VertexId w : path) exit[ix(w)] = e, state[ix(w)] = 0;
    path.clear();
  }
  return exit;
}

}  // namespace rotor
