#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "rotor/extended_count.hpp"
#include "rotor/game_spec.hpp"
#include "rotor/graph.hpp"
#include "rotor/return_flows.hpp"
#include "rotor/rooted.hpp"

namespace rotor {

enum class Player { max, min };

enum class GameVariant {
  positional,        // the player fixes the initial rotor of each owned vertex
  free_rotor_order,  // ... and also its rotor order
  free_per_visit,    // the player picks an arc at every visit
};

// Best binary value reachable in the subtree behind an edge and the matching return flow.
struct EdgeGameSummary {
  int value = 0;
  ExtendedCount return_flow;
};

struct StrategyChoice {
  ArcId arc = kNoArc;
  ExtendedCount return_flow;
  int value = 0;
  std::vector<ArcId> rotor_order;  // free_rotor_order only
};

namespace detail {

inline bool prefers(Player p, int value) { return p == Player::max ? value == 1 : value == 0; }

struct Turns {
  ExtendedCount turns;
  bool any_finite = false;
};

inline Turns full_turns(const RotorGraph& g, VertexId v, std::span<const ExtendedCount> r, std::size_t back) {
  Turns t;
  auto nb = g.out_neighbors(v);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (k == back || r[k].is_infinite()) continue;
    ExtendedCount q = (r[k] - ExtendedCount(1)) / ExtendedCount(nb[k].multiplicity);
    if (!t.any_finite || q < t.turns) t.turns = q;
    t.any_finite = true;
  }
  return t;
}

inline ExtendedCount back_multiplicity(const RotorGraph& g, VertexId v, std::size_t back) {
  return back == kNoSlot ? ExtendedCount(0) : ExtendedCount(g.multiplicity(v, back));
}

}  // namespace detail

// Best initial rotor at v for a player, when the particle arrives from u (kNoVertex for none),
// u sends it straight back, and the subtrees behind the other neighbours have the given
// return flows and values. r and val are indexed by the neighbour slots of v; the slot of u is ignored.
// Every start arc is scanned in one sliding pass over the rotor order; ties go to the first start.
inline StrategyChoice optimal_strategy_routine(const RotorGraph& g, VertexId u, VertexId v,
                                               std::span<const ExtendedCount> r, std::span<const int> val,
                                               Player player = Player::max) {
  const std::size_t back = u == kNoVertex ? kNoSlot : g.slot_of(v, u);
  auto order = g.rotor_order(v);
  const std::size_t d = order.size();
  auto turns = detail::full_turns(g, v, r, back);
  StrategyChoice out;
  if (!turns.any_finite) {
    out.arc = order[0];
    out.value = 0;  // the particle never stops
    out.return_flow = back == kNoSlot ? ExtendedCount(1) : ExtendedCount::infinity();
    return out;
  }
  auto nb = g.out_neighbors(v);
  std::vector<ExtendedCount> left(nb.size());
  for (std::size_t k = 0; k < nb.size(); ++k)
    if (k != back) left[k] = r[k] - turns.turns * ExtendedCount(nb[k].multiplicity);

  std::uint64_t fu = 0;
  std::size_t e = 0;
  std::optional<std::uint64_t> best_good, best_bad;
  std::size_t good_at = 0, bad_at = 0;
  for (std::size_t s = 0; s < d; ++s) {
    if (e < s) e = s;
    for (;;) {
      std::size_t k = g.neighbor_slot(order[e % d]);
      if (k == back) {
        ++fu;
        ++e;
      } else if (left[k] > ExtendedCount(1)) {
        --left[k];
        ++e;
      } else {
        break;
      }
    }
    int value = val[g.neighbor_slot(order[e % d])];
    if (detail::prefers(player, value)) {
      if (!best_good || fu < *best_good) best_good = fu, good_at = s;
    } else {
      if (!best_bad || fu > *best_bad) best_bad = fu, bad_at = s;
    }
    if (e > s) {
      std::size_t k = g.neighbor_slot(order[s]);
      if (k == back) --fu;
      else ++left[k];
    }
  }
  std::uint64_t f = best_good ? *best_good : *best_bad;
  out.arc = order[best_good ? good_at : bad_at];
  out.value = best_good ? (player == Player::max ? 1 : 0) : (player == Player::max ? 0 : 1);
  out.return_flow = back == kNoSlot ? ExtendedCount(1)
                                    : turns.turns * detail::back_multiplicity(g, v, back) + ExtendedCount(f) + ExtendedCount(1);
  return out;
}

// Same question when the player also chooses the rotor order at v.
inline StrategyChoice free_order_choice(const RotorGraph& g, VertexId u, VertexId v, std::span<const ExtendedCount> r,
                                        std::span<const int> val, Player player = Player::max) {
  const std::size_t back = u == kNoVertex ? kNoSlot : g.slot_of(v, u);
  auto nb = g.out_neighbors(v);
  auto turns = detail::full_turns(g, v, r, back);
  StrategyChoice out;
  std::vector<ArcId> order(g.rotor_order(v).begin(), g.rotor_order(v).end());
  auto slot_first = [&](std::size_t k) {
    std::stable_partition(order.begin(), order.end(), [&](ArcId a) { return g.neighbor_slot(a) == k; });
  };
  auto slot_last = [&](std::size_t k) {
    std::stable_partition(order.begin(), order.end(), [&](ArcId a) { return g.neighbor_slot(a) != k; });
  };
  if (!turns.any_finite) {
    out.value = 0;
    out.return_flow = back == kNoSlot ? ExtendedCount(1) : ExtendedCount::infinity();
    out.rotor_order = order;
    out.arc = order[0];
    return out;
  }
  std::size_t target = kNoSlot;
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (k == back || r[k].is_infinite()) continue;
    ExtendedCount m(nb[k].multiplicity);
    bool candidate = r[k] - turns.turns * m <= m;
    if (candidate && detail::prefers(player, val[k])) {
      target = k;
      break;
    }
  }
  ExtendedCount mb = detail::back_multiplicity(g, v, back);
  if (target != kNoSlot) {
    if (back != kNoSlot) slot_last(back);
    slot_first(target);
    out.value = player == Player::max ? 1 : 0;
    out.return_flow = back == kNoSlot ? ExtendedCount(1) : turns.turns * mb + ExtendedCount(1);
  } else {
    if (back != kNoSlot) slot_first(back);
    out.value = player == Player::max ? 0 : 1;
    out.return_flow = back == kNoSlot ? ExtendedCount(1) : (turns.turns + ExtendedCount(1)) * mb + ExtendedCount(1);
  }
  out.rotor_order = order;
  out.arc = order[0];
  return out;
}

// Same question when the player picks an arc at every visit.
inline StrategyChoice per_visit_choice(const RotorGraph& g, VertexId u, VertexId v, std::span<const int> val,
                                       Player player = Player::max) {
  const std::size_t back = u == kNoVertex ? kNoSlot : g.slot_of(v, u);
  auto nb = g.out_neighbors(v);
  StrategyChoice out;
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (k == back || !detail::prefers(player, val[k])) continue;
    for (ArcId a : g.rotor_order(v))
      if (g.neighbor_slot(a) == k) {
        out.arc = a;
        break;
      }
    out.value = player == Player::max ? 1 : 0;
    out.return_flow = ExtendedCount(1);
    return out;
  }
  out.value = player == Player::max ? 0 : 1;
  if (back == kNoSlot) {
    out.arc = g.rotor_order(v)[0];
    out.return_flow = ExtendedCount(1);
  } else {
    for (ArcId a : g.rotor_order(v))
      if (g.neighbor_slot(a) == back) {
        out.arc = a;
        break;
      }
    out.return_flow = ExtendedCount::infinity();
  }
  return out;
}

struct BinarySolution {
  int value = 0;
  Strategy max_strategy;
  Strategy min_strategy;
  std::vector<std::vector<ArcId>> chosen_orders;  // free_rotor_order only, per vertex
  std::vector<std::optional<EdgeGameSummary>> summaries;  // by neighbour pair, edges leaving the root side
  SolverCounters counters;
};

// Binary game on a stopping forest-like graph, solved from u0 by summarising every edge
// that points away from u0. MIN vertices are handled with the roles of 0 and 1 swapped.
inline BinarySolution solve_binary_prepared(const GameSpec& game, VertexId u0,
                                            GameVariant variant = GameVariant::positional) {
  const RotorGraph& g = game.graph;
  const std::size_t n = g.vertex_count();
  BinarySolution sol;
  sol.max_strategy = Strategy(n);
  sol.min_strategy = Strategy(n);
  sol.summaries.assign(g.pair_count(), std::nullopt);
  sol.chosen_orders.assign(n, {});
  sol.counters = SolverCounters(n);
  auto ro = bfs_order(g, u0);

  auto evaluate = [&](VertexId v, VertexId parent) -> EdgeGameSummary {
    if (g.is_sink(v)) return {static_cast<int>(game.sink_value[ix(v)] >= 1 ? 1 : 0), ExtendedCount(1)};
    auto nb = g.out_neighbors(v);
    const std::size_t back = parent == kNoVertex ? kNoSlot : g.slot_of(v, parent);
    std::vector<ExtendedCount> r(nb.size(), ExtendedCount::infinity());
    std::vector<int> val(nb.size(), 0);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (k == back) continue;
      const auto& s = sol.summaries[g.pair_id(v, k)];
      if (!s) throw std::logic_error("game summary missing below " + g.name(v));
      r[k] = s->return_flow;
      val[k] = s->value;
    }
    ++sol.counters.routine_calls[ix(v)];
    if (!game.owned(v)) {
      if (all_infinite_except(r, back)) return {0, back == kNoSlot ? ExtendedCount(1) : ExtendedCount::infinity()};
      auto res = improved_revolving_routine(g, v, game.fixed[v], r);
      int value = val[g.neighbor_slot(res.last_arc)];
      return {value, back == kNoSlot ? ExtendedCount(1) : res.flows[back] + ExtendedCount(1)};
    }
    Player who = game.is_max(v) ? Player::max : Player::min;
    StrategyChoice ch;
    switch (variant) {
      case GameVariant::positional: ch = optimal_strategy_routine(g, parent, v, r, val, who); break;
      case GameVariant::free_rotor_order: ch = free_order_choice(g, parent, v, r, val, who); break;
      case GameVariant::free_per_visit: ch = per_visit_choice(g, parent, v, val, who); break;
    }
    (who == Player::max ? sol.max_strategy : sol.min_strategy).set(v, ch.arc);
    sol.chosen_orders[ix(v)] = ch.rotor_order;
    return {ch.value, ch.return_flow};
  };

  for (std::size_t i = ro.order.size(); i-- > 1;) {
    VertexId v = ro.order[i];
    VertexId p = ro.parent[ix(v)];
    std::size_t k = g.slot_of(p, v);
    if (k == kNoSlot) continue;
    sol.summaries[g.pair_id(p, k)] = evaluate(v, p);
  }
  sol.value = evaluate(u0, kNoVertex).value;
  // Owned vertices outside the root's component keep their first arc.
  for (std::size_t v = 0; v < n; ++v) {
    VertexId vid = vertex_at(v);
    if (game.is_max(vid) && !sol.max_strategy.has(vid)) sol.max_strategy.set(vid, g.rotor_order(vid)[0]);
    if (game.is_min(vid) && !sol.min_strategy.has(vid)) sol.min_strategy.set(vid, g.rotor_order(vid)[0]);
  }
  return sol;
}

// A game reduced to a stopping forest-like graph, with maps back to the input.
struct PreparedGame {
  GameSpec game;
  std::vector<VertexId> vertex_origin;  // prepared -> input (kNoVertex for contracted components)
  std::vector<VertexId> vertex_image;   // input -> prepared
  std::vector<ArcId> arc_origin;        // prepared -> input
};

// Checks the input, contracts closed components into value-0 sinks and gives every sink
// its own copy per neighbour.
inline PreparedGame prepare_game(const GameSpec& game) {
  validate_game(game);
  if (!is_tree_like(game.graph)) throw SolverRefusal("game solver needs a tree-like graph");
  PreparedGame p;
  const RotorGraph& g0 = game.graph;
  DerivedGraph c = contract_sink_components(g0);
  DerivedGraph d = detach_sinks(c.graph);
  const RotorGraph& g = d.graph;
  p.game.graph = g;
  p.game.owner.assign(g.vertex_count(), Owner::random);
  p.game.sink_value.assign(g.vertex_count(), 0);
  p.game.fixed = RotorConfig(g.vertex_count());
  p.vertex_origin.assign(g.vertex_count(), kNoVertex);
  p.vertex_image.assign(g0.vertex_count(), kNoVertex);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexId mid = d.vertex_origin[v];
    VertexId orig = c.vertex_origin[ix(mid)];
    p.vertex_origin[v] = orig;
    if (orig == kNoVertex) continue;
    p.game.owner[v] = game.owner[ix(orig)];
    p.game.sink_value[v] = game.sink_value[ix(orig)];
  }
  for (std::size_t v = 0; v < g0.vertex_count(); ++v) {
    VertexId mid = c.vertex_image[v];
    p.vertex_image[v] = d.vertex_image[ix(mid)];
    if (p.vertex_image[v] == kNoVertex) {  // a sink split into copies: any copy will do
      for (std::size_t w = 0; w < g.vertex_count(); ++w)
        if (d.vertex_origin[w] == mid) {
          p.vertex_image[v] = vertex_at(w);
          break;
        }
    }
  }
  p.arc_origin.resize(g.arc_count());
  std::vector<ArcId> image(g0.arc_count(), kNoArc);
  for (std::size_t a = 0; a < g.arc_count(); ++a) {
    p.arc_origin[a] = c.arc_origin[ix(d.arc_origin[a])];
    image[ix(p.arc_origin[a])] = arc_at(a);
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexId orig = p.vertex_origin[v];
    if (orig == kNoVertex || g.is_sink(vertex_at(v)) || !game.fixed.has(orig)) continue;
    p.game.fixed.set(vertex_at(v), image[ix(game.fixed[orig])]);
  }
  return p;
}

inline Strategy strategy_to_input(const PreparedGame& p, const GameSpec& input, const Strategy& s, Player who) {
  Strategy out(input.graph.vertex_count());
  for (std::size_t v = 0; v < p.game.graph.vertex_count(); ++v) {
    VertexId orig = p.vertex_origin[v];
    if (orig == kNoVertex || !s.has(vertex_at(v))) continue;
    out.set(orig, p.arc_origin[ix(s[vertex_at(v)])]);
  }
  for (std::size_t v = 0; v < input.graph.vertex_count(); ++v) {
    VertexId vid = vertex_at(v);
    bool mine = who == Player::max ? input.is_max(vid) : input.is_min(vid);
    if (mine && !out.has(vid)) out.set(vid, input.graph.rotor_order(vid)[0]);
  }
  return out;
}

struct GameSolution {
  std::int64_t value = 0;
  Strategy max_strategy;  // witness in the input graph
  Strategy min_strategy;
  std::vector<std::vector<ArcId>> chosen_orders;  // free_rotor_order, in input arc ids
  std::size_t probes = 0;
  SolverCounters counters;
};

namespace detail {

inline bool is_binary(const GameSpec& g) {
  for (std::size_t v = 0; v < g.graph.vertex_count(); ++v)
    if (g.graph.is_sink(vertex_at(v)) && g.sink_value[v] > 1) return false;
  return true;
}

inline GameSolution lift(const PreparedGame& p, const GameSpec& input, const BinarySolution& b) {
  GameSolution s;
  s.value = b.value;
  s.max_strategy = strategy_to_input(p, input, b.max_strategy, Player::max);
  s.min_strategy = strategy_to_input(p, input, b.min_strategy, Player::min);
  s.chosen_orders.assign(input.graph.vertex_count(), {});
  for (std::size_t v = 0; v < b.chosen_orders.size(); ++v) {
    VertexId orig = p.vertex_origin[v];
    if (orig == kNoVertex) continue;
    for (ArcId a : b.chosen_orders[v]) s.chosen_orders[ix(orig)].push_back(p.arc_origin[ix(a)]);
  }
  s.probes = 1;
  s.counters = b.counters;
  return s;
}

inline VertexId prepared_start(const PreparedGame& p, VertexId u0) {
  if (ix(u0) >= p.vertex_image.size()) throw std::invalid_argument("start vertex out of range");
  return p.vertex_image[ix(u0)];
}

}  // namespace detail

// Optimal value for MAX with 0/1 sink values.
inline GameSolution solve_one_player_binary(const GameSpec& game, VertexId u0,
                                            GameVariant variant = GameVariant::positional) {
  auto p = prepare_game(game);
  if (!detail::is_binary(game)) throw InvalidInstance("binary solver needs sink values 0 or 1");
  for (std::size_t v = 0; v < game.graph.vertex_count(); ++v)
    if (game.is_min(vertex_at(v))) throw InvalidInstance("one-player solver: vertex " + game.graph.name(vertex_at(v)) + " belongs to MIN");
  return detail::lift(p, game, solve_binary_prepared(p.game, detail::prepared_start(p, u0), variant));
}

inline GameSolution solve_two_player_binary(const GameSpec& game, VertexId u0) {
  auto p = prepare_game(game);
  if (!detail::is_binary(game)) throw InvalidInstance("binary solver needs sink values 0 or 1");
  return detail::lift(p, game, solve_binary_prepared(p.game, detail::prepared_start(p, u0)));
}

namespace detail {

// Largest threshold x among the sink values for which the thresholded game has value 1.
template <class Probe>
GameSolution bisect_values(const PreparedGame& p, const GameSpec& input, Probe probe) {
  std::set<std::int64_t> distinct{0};
  for (std::size_t v = 0; v < p.game.graph.vertex_count(); ++v)
    if (p.game.graph.is_sink(vertex_at(v))) distinct.insert(p.game.sink_value[v]);
  std::vector<std::int64_t> values(distinct.begin(), distinct.end());
  // probe(values[0]) is always 1, the answer is the last index where the probe says 1.
  std::size_t lo = 0, hi = values.size();
  BinarySolution best = probe(values[0]);
  std::size_t probes = 1;
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    auto b = probe(values[mid]);
    ++probes;
    if (b.value == 1) {
      lo = mid;
      best = std::move(b);
    } else {
      hi = mid;
    }
  }
  GameSolution s = lift(p, input, best);
  s.value = values[lo];
  s.probes = probes;
  return s;
}

}  // namespace detail

inline GameSolution solve_one_player_integer(const GameSpec& game, VertexId u0,
                                             GameVariant variant = GameVariant::positional) {
  auto p = prepare_game(game);
  for (std::size_t v = 0; v < game.graph.vertex_count(); ++v)
    if (game.is_min(vertex_at(v))) throw InvalidInstance("one-player solver: vertex " + game.graph.name(vertex_at(v)) + " belongs to MIN");
  VertexId s = detail::prepared_start(p, u0);
  return detail::bisect_values(p, game, [&](std::int64_t x) {
    return solve_binary_prepared(threshold_game(p.game, x), s, variant);
  });
}

// Value only; the strategies of the final probe are returned as they are.
inline GameSolution solve_two_player_integer(const GameSpec& game, VertexId u0) {
  auto p = prepare_game(game);
  VertexId s = detail::prepared_start(p, u0);
  return detail::bisect_values(p, game, [&](std::int64_t x) { return solve_binary_prepared(threshold_game(p.game, x), s); });
}

}  // namespace rotor
