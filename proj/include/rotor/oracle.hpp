#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "rotor/errors.hpp"
#include "rotor/extended_count.hpp"
#include "rotor/game_spec.hpp"
#include "rotor/graph.hpp"
#include "rotor/return_flows.hpp"
#include "rotor/walk.hpp"

// Naive references. Nothing here calls the return-flow, game or simple-graph solvers.
namespace rotor::oracle {

struct EnumerationBudget {
  std::uint64_t max_strategy_count = 1u << 20;
  ExtendedCount max_steps = ExtendedCount(50'000'000);
};

namespace detail {

inline std::uint64_t step_cap(const EnumerationBudget& b) {
  auto v = b.max_steps.to_u64();
  return v ? *v : std::numeric_limits<std::uint64_t>::max();
}

// Cartesian product of per-vertex choices, visited as index tuples.
class Odometer {
 public:
  explicit Odometer(std::vector<std::size_t> radix) : radix_(std::move(radix)), digit_(radix_.size(), 0) {}
  const std::vector<std::size_t>& digits() const { return digit_; }
  bool next() {
    for (std::size_t i = 0; i < radix_.size(); ++i) {
      if (++digit_[i] < radix_[i]) return true;
      digit_[i] = 0;
    }
    return false;
  }

 private:
  std::vector<std::size_t> radix_;
  std::vector<std::size_t> digit_;
};

inline std::uint64_t space_size(const std::vector<std::size_t>& radix, std::uint64_t cap, const char* what) {
  std::uint64_t s = 1;
  for (std::size_t r : radix) {
    if (r == 0) return 0;
    if (s > cap / r) throw CapExceeded(std::string(what) + ": strategy space exceeds the budget");
    s *= r;
  }
  return s;
}

struct Side {
  std::vector<VertexId> vertices;
  std::vector<std::size_t> radix;
};

inline Side side_of(const GameSpec& game, Owner who) {
  Side s;
  for (std::size_t v = 0; v < game.graph.vertex_count(); ++v) {
    VertexId vid = vertex_at(v);
    if (game.graph.is_sink(vid) || game.owner[v] != who) continue;
    s.vertices.push_back(vid);
    s.radix.push_back(game.graph.out_degree(vid));
  }
  return s;
}

inline Strategy strategy_from(const GameSpec& game, const Side& side, const std::vector<std::size_t>& digits) {
  Strategy s(game.graph.vertex_count());
  for (std::size_t i = 0; i < side.vertices.size(); ++i)
    s.set(side.vertices[i], game.graph.out_arcs(side.vertices[i])[digits[i]]);
  return s;
}

// Walk value with traps precomputed once per graph.
class Evaluator {
 public:
  Evaluator(const GameSpec& game, VertexId u0, const EnumerationBudget& b)
      : game_(game), u0_(u0), traps_(sink_components(game.graph)), cap_(step_cap(b)) {}

  std::int64_t operator()(const Strategy& sigma, const Strategy& tau) const {
    if (game_.graph.is_sink(u0_)) return game_.sink_value[ix(u0_)];
    WalkOptions opt;
    opt.traps = &traps_;
    opt.step_cap = cap_;
    auto w = run_maximal_walk(game_.graph, combine(game_, sigma, tau), u0_, opt);
    if (w.status == WalkStatus::cap_hit) throw CapExceeded("oracle: step cap reached");
    return w.exit ? game_.sink_value[ix(*w.exit)] : 0;
  }

 private:
  const GameSpec& game_;
  VertexId u0_;
  std::vector<std::size_t> traps_;
  std::uint64_t cap_;
};

}  // namespace detail

struct SimulatedExit {
  std::optional<VertexId> sink;
  bool trapped = false;
  bool cap_hit = false;
  ExtendedCount steps;
};

inline SimulatedExit exit_by_simulation(const RotorGraph& g, const RotorConfig& c, VertexId u,
                                        const EnumerationBudget& budget = {}) {
  WalkOptions opt;
  opt.step_cap = detail::step_cap(budget);
  auto w = run_maximal_walk(g, c, u, opt);
  return {w.exit, w.status == WalkStatus::trapped, w.status == WalkStatus::cap_hit, w.steps};
}

// Exit of every vertex, each by its own walk.
inline std::vector<std::optional<VertexId>> exit_pattern_by_simulation(const RotorGraph& g, const RotorConfig& c,
                                                                       const EnumerationBudget& budget = {}) {
  std::vector<std::size_t> traps = sink_components(g);
  WalkOptions opt;
  opt.step_cap = detail::step_cap(budget);
  opt.traps = &traps;
  std::vector<std::optional<VertexId>> out(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    auto w = run_maximal_walk(g, c, vertex_at(v), opt);
    if (w.status == WalkStatus::cap_hit) throw CapExceeded("exit_pattern_by_simulation: step cap reached");
    out[v] = w.exit;
  }
  return out;
}

inline ExtendedCount return_flow_reference(const RotorGraph& g, const RotorConfig& c, VertexId u, VertexId v) {
  return return_flow_oracle(g, c, u, v);
}

struct OnePlayerEnumeration {
  std::int64_t value = 0;
  std::vector<Strategy> argmax;
  std::uint64_t strategies = 0;
};

// Every positional MAX strategy, walked one by one.
inline OnePlayerEnumeration enumerate_one_player(const GameSpec& game, VertexId u0, const EnumerationBudget& budget = {}) {
  auto side = detail::side_of(game, Owner::max);
  std::uint64_t total = detail::space_size(side.radix, budget.max_strategy_count, "enumerate_one_player");
  detail::Evaluator eval(game, u0, budget);
  Strategy none(game.graph.vertex_count());
  OnePlayerEnumeration out;
  out.strategies = total;
  detail::Odometer odo(side.radix);
  bool first = true;
  do {
    Strategy s = detail::strategy_from(game, side, odo.digits());
    std::int64_t v = eval(s, none);
    if (first || v > out.value) {
      out.value = v;
      out.argmax.clear();
      first = false;
    }
    if (v == out.value) out.argmax.push_back(std::move(s));
  } while (odo.next());
  return out;
}

struct TwoPlayerEnumeration {
  std::int64_t maximin = 0;  // max over sigma of min over tau
  std::int64_t minimax = 0;  // min over tau of max over sigma
  Strategy maximin_sigma;
  Strategy minimax_tau;
};

inline TwoPlayerEnumeration enumerate_two_player(const GameSpec& game, VertexId u0, const EnumerationBudget& budget = {}) {
  auto smax = detail::side_of(game, Owner::max);
  auto smin = detail::side_of(game, Owner::min);
  std::uint64_t nmax = detail::space_size(smax.radix, budget.max_strategy_count, "enumerate_two_player");
  std::uint64_t nmin = detail::space_size(smin.radix, budget.max_strategy_count, "enumerate_two_player");
  detail::Evaluator eval(game, u0, budget);
  std::vector<Strategy> sig, tau;
  sig.reserve(nmax);
  tau.reserve(nmin);
  detail::Odometer a(smax.radix);
  do sig.push_back(detail::strategy_from(game, smax, a.digits()));
  while (a.next());
  detail::Odometer b(smin.radix);
  do tau.push_back(detail::strategy_from(game, smin, b.digits()));
  while (b.next());
  std::vector<std::int64_t> m(sig.size() * tau.size());
  for (std::size_t i = 0; i < sig.size(); ++i)
    for (std::size_t j = 0; j < tau.size(); ++j) m[i * tau.size() + j] = eval(sig[i], tau[j]);
  TwoPlayerEnumeration out;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    std::int64_t worst = *std::min_element(m.begin() + i * tau.size(), m.begin() + (i + 1) * tau.size());
    if (i == 0 || worst > out.maximin) out.maximin = worst, out.maximin_sigma = sig[i];
  }
  for (std::size_t j = 0; j < tau.size(); ++j) {
    std::int64_t best = m[j];
    for (std::size_t i = 1; i < sig.size(); ++i) best = std::max(best, m[i * tau.size() + j]);
    if (j == 0 || best < out.minimax) out.minimax = best, out.minimax_tau = tau[j];
  }
  return out;
}

// Worst value for MAX playing sigma, over every MIN strategy.
inline std::int64_t min_against(const GameSpec& game, const Strategy& sigma, VertexId u0, const EnumerationBudget& budget = {}) {
  auto smin = detail::side_of(game, Owner::min);
  detail::space_size(smin.radix, budget.max_strategy_count, "min_against");
  detail::Evaluator eval(game, u0, budget);
  detail::Odometer odo(smin.radix);
  std::optional<std::int64_t> best;
  do {
    std::int64_t v = eval(sigma, detail::strategy_from(game, smin, odo.digits()));
    if (!best || v < *best) best = v;
  } while (odo.next());
  return *best;
}

// Best value for MAX against tau, over every MAX strategy.
inline std::int64_t max_against(const GameSpec& game, const Strategy& tau, VertexId u0, const EnumerationBudget& budget = {}) {
  auto smax = detail::side_of(game, Owner::max);
  detail::space_size(smax.radix, budget.max_strategy_count, "max_against");
  detail::Evaluator eval(game, u0, budget);
  detail::Odometer odo(smax.radix);
  std::optional<std::int64_t> best;
  do {
    std::int64_t v = eval(detail::strategy_from(game, smax, odo.digits()), tau);
    if (!best || v > *best) best = v;
  } while (odo.next());
  return *best;
}

// MAX picks both the rotor order and the initial rotor of each owned vertex: every
// permutation of the out-arcs, read as an order starting at its first arc.
inline std::int64_t enumerate_free_rotor_order(const GameSpec& game, VertexId u0, const EnumerationBudget& budget = {}) {
  const RotorGraph& g = game.graph;
  auto side = detail::side_of(game, Owner::max);
  std::vector<std::vector<std::vector<ArcId>>> perms(side.vertices.size());
  std::vector<std::size_t> radix;
  for (VertexId v : side.vertices) {
    std::vector<ArcId> arcs(g.out_arcs(v).begin(), g.out_arcs(v).end());
    std::sort(arcs.begin(), arcs.end());
    auto& p = perms[radix.size()];
    do {
      p.push_back(arcs);
      if (p.size() > budget.max_strategy_count) throw CapExceeded("enumerate_free_rotor_order: strategy space exceeds the budget");
    } while (std::next_permutation(arcs.begin(), arcs.end()));
    radix.push_back(p.size());
  }
  detail::space_size(radix, budget.max_strategy_count, "enumerate_free_rotor_order");
  std::vector<std::size_t> traps = sink_components(g);
  WalkOptions opt;
  opt.traps = &traps;
  opt.step_cap = detail::step_cap(budget);
  if (g.is_sink(u0)) return game.sink_value[ix(u0)];
  std::optional<std::int64_t> best;
  detail::Odometer odo(radix);
  do {
    auto orders = g.rotor_orders();
    RotorConfig c = combine(game, Strategy(), Strategy());
    for (std::size_t i = 0; i < side.vertices.size(); ++i) {
      const auto& ord = perms[i][odo.digits()[i]];
      orders[ix(side.vertices[i])] = ord;
      c.set(side.vertices[i], ord[0]);
    }
    RotorGraph h(g.names(), g.roles(), g.arcs(), orders);
    auto w = run_maximal_walk(h, c, u0, opt);
    if (w.status == WalkStatus::cap_hit) throw CapExceeded("enumerate_free_rotor_order: step cap reached");
    std::int64_t v = w.exit ? game.sink_value[ix(*w.exit)] : 0;
    if (!best || v > *best) best = v;
  } while (odo.next());
  return *best;
}

// MAX picks an arc at every visit: the best sink value reachable in the graph of
// (position, rotors of the random vertices) states, or 0 when no sink is reachable.
inline std::int64_t per_visit_value(const GameSpec& game, VertexId u0, const EnumerationBudget& budget = {}) {
  const RotorGraph& g = game.graph;
  if (g.is_sink(u0)) return game.sink_value[ix(u0)];
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (game.is_min(vertex_at(v))) throw InvalidInstance("per_visit_value: one-player games only");
  struct State {
    VertexId pos;
    RotorConfig rotors;
  };
  auto key = [&](const State& s) {
    std::string k(reinterpret_cast<const char*>(&s.pos), sizeof(VertexId));
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      ArcId a = s.rotors[vertex_at(v)];
      if (!game.owned(vertex_at(v))) k.append(reinterpret_cast<const char*>(&a), sizeof(ArcId));
    }
    return k;
  };
  std::unordered_set<std::string> seen;
  std::vector<State> stack{{u0, game.fixed}};
  seen.insert(key(stack.back()));
  std::optional<std::int64_t> best;
  while (!stack.empty()) {
    State s = std::move(stack.back());
    stack.pop_back();
    if (g.is_sink(s.pos)) {
      std::int64_t v = game.sink_value[ix(s.pos)];
      if (!best || v > *best) best = v;
      continue;
    }
    std::vector<ArcId> moves;
    if (game.owned(s.pos)) moves.assign(g.out_arcs(s.pos).begin(), g.out_arcs(s.pos).end());
    else moves.push_back(s.rotors[s.pos]);
    for (ArcId a : moves) {
      State t{g.head(a), s.rotors};
      if (!game.owned(s.pos)) t.rotors.set(s.pos, g.theta(a));
      if (seen.insert(key(t)).second) {
        if (seen.size() > budget.max_strategy_count) throw CapExceeded("per_visit_value: state space exceeds the budget");
        stack.push_back(std::move(t));
      }
    }
  }
  return best.value_or(0);
}

// Largest number of crossings u->v over MAX strategies, from u0, once v's out-arcs are
// replaced by a single arc back to u. Infinite when the walk gets stuck around u.
inline ExtendedCount access_flow_reference(const GameSpec& game, VertexId u0, VertexId u, VertexId v,
                                           const EnumerationBudget& budget = {}) {
  const RotorGraph& g = game.graph;
  std::vector<std::string> names = g.names();
  std::vector<VertexRole> roles = g.roles();
  std::vector<Arc> arcs;
  std::vector<ArcId> new_id(g.arc_count(), kNoArc);
  for (std::size_t i = 0; i < g.arc_count(); ++i) {
    if (g.tail(arc_at(i)) == v) continue;
    new_id[i] = arc_at(arcs.size());
    arcs.push_back(g.arc(arc_at(i)));
  }
  ArcId bounce = arc_at(arcs.size());
  arcs.push_back({v, u});
  std::vector<std::vector<ArcId>> orders(g.vertex_count());
  for (std::size_t x = 0; x < g.vertex_count(); ++x)
    for (ArcId a : g.rotor_order(vertex_at(x)))
      if (new_id[ix(a)] != kNoArc) orders[x].push_back(new_id[ix(a)]);
  orders[ix(v)] = {bounce};
  roles[ix(v)] = VertexRole::plain;
  RotorGraph h(std::move(names), std::move(roles), std::move(arcs), std::move(orders));
  std::vector<std::size_t> traps = sink_components(h);

  auto side = detail::side_of(game, Owner::max);
  std::vector<std::size_t> radix = side.radix;
  for (std::size_t i = 0; i < side.vertices.size(); ++i)
    if (side.vertices[i] == v) radix[i] = 1;
  detail::space_size(radix, budget.max_strategy_count, "access_flow_reference");
  WalkOptions opt;
  opt.traps = &traps;
  opt.record_flows = true;
  opt.step_cap = detail::step_cap(budget);
  ExtendedCount best(0);
  detail::Odometer odo(radix);
  do {
    RotorConfig c(h.vertex_count());
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
      VertexId xid = vertex_at(x);
      if (xid == v) c.set(xid, bounce);
      else if (!g.is_sink(xid) && game.fixed.has(xid) && !game.owned(xid)) c.set(xid, new_id[ix(game.fixed[xid])]);
    }
    for (std::size_t i = 0; i < side.vertices.size(); ++i)
      if (side.vertices[i] != v) c.set(side.vertices[i], new_id[ix(g.out_arcs(side.vertices[i])[odo.digits()[i]])]);
    auto w = run_maximal_walk(h, c, u0, opt);
    if (w.status == WalkStatus::cap_hit) throw CapExceeded("access_flow_reference: step cap reached");
    ExtendedCount crossings(0);
    for (std::size_t i = 0; i < g.arc_count(); ++i)
      if (new_id[i] != kNoArc && g.tail(arc_at(i)) == u && g.head(arc_at(i)) == v)
        crossings += ExtendedCount(w.arc_flows[ix(new_id[i])]);
    if (w.status == WalkStatus::trapped && traps[ix(u)] != kNoSlot && traps[ix(u)] == traps[ix(w.position)])
      crossings = ExtendedCount::infinity();
    if (crossings > best) best = crossings;
  } while (odo.next());
  return best;
}

}  // namespace rotor::oracle
