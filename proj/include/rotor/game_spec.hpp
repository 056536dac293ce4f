#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotor/graph.hpp"
#include "rotor/walk.hpp"

namespace rotor {

enum class Owner : std::uint8_t { random, max, min };

inline const char* owner_name(Owner o) {
  switch (o) {
    case Owner::max: return "max";
    case Owner::min: return "min";
    default: return "rand";
  }
}

// A rotor graph where some plain vertices belong to players. Random vertices follow
// the fixed config; the config entries at owned vertices are ignored by solvers.
struct GameSpec {
  RotorGraph graph;
  std::vector<Owner> owner;
  std::vector<std::int64_t> sink_value;
  RotorConfig fixed;

  bool owned(VertexId v) const { return !graph.is_sink(v) && owner[ix(v)] != Owner::random; }
  bool is_max(VertexId v) const { return !graph.is_sink(v) && owner[ix(v)] == Owner::max; }
  bool is_min(VertexId v) const { return !graph.is_sink(v) && owner[ix(v)] == Owner::min; }
};

inline void validate_game(const GameSpec& g) {
  require_valid(g.graph);
  const std::size_t n = g.graph.vertex_count();
  if (g.owner.size() != n || g.sink_value.size() != n || g.fixed.size() != n)
    throw InvalidInstance("game: owner, value and config tables must cover every vertex");
  for (std::size_t v = 0; v < n; ++v) {
    VertexId vid = vertex_at(v);
    if (g.graph.is_sink(vid)) {
      if (g.sink_value[v] < 0) throw InvalidInstance("sink " + g.graph.name(vid) + " has a negative value");
      continue;
    }
    if (g.owner[v] != Owner::random) continue;
    if (!g.fixed.has(vid) || g.graph.tail(g.fixed[vid]) != vid)
      throw InvalidInstance("random vertex " + g.graph.name(vid) + " has no valid config arc");
  }
}

// Partial config on owned vertices.
using Strategy = RotorConfig;

// Random vertices from the fixed config, owned ones from the strategies.
inline RotorConfig combine(const GameSpec& g, const Strategy& sigma, const Strategy& tau) {
  RotorConfig c = g.fixed;
  for (std::size_t v = 0; v < g.graph.vertex_count(); ++v) {
    VertexId vid = vertex_at(v);
    if (g.is_max(vid) && sigma.size() > v && sigma.has(vid)) c.set(vid, sigma[vid]);
    if (g.is_min(vid) && tau.size() > v && tau.has(vid)) c.set(vid, tau[vid]);
    if (g.owned(vid) && !c.has(vid)) c.set(vid, g.graph.rotor_order(vid)[0]);
  }
  return c;
}

// Sink value reached by the walk from u0, or 0 when the walk never stops.
inline std::int64_t value_under_strategies(const GameSpec& g, const Strategy& sigma, const Strategy& tau, VertexId u0) {
  if (g.graph.is_sink(u0)) return g.sink_value[ix(u0)];
  auto w = run_maximal_walk(g.graph, combine(g, sigma, tau), u0);
  if (w.status == WalkStatus::cap_hit) throw CapExceeded("value_under_strategies: step cap reached");
  return w.exit ? g.sink_value[ix(*w.exit)] : 0;
}

// Same game with sink values replaced by 1 when at least threshold, else 0.
inline GameSpec threshold_game(const GameSpec& g, std::int64_t threshold) {
  GameSpec b = g;
  for (std::size_t v = 0; v < g.graph.vertex_count(); ++v)
    if (g.graph.is_sink(vertex_at(v))) b.sink_value[v] = g.sink_value[v] >= threshold ? 1 : 0;
  return b;
}

}  // namespace rotor
