#include <gtest/gtest.h>

#include <map>

#include "rotor/oracle.hpp"
#include "rotor/return_flows.hpp"
#include "test_support.hpp"

using namespace rotor;
using rotor::testing::arc_named;
using rotor::testing::load_data;
using rotor::testing::random_instance;
using rotor::testing::vid;

namespace {

const ExtendedCount inf = ExtendedCount::infinity();

ExtendedCount table_at(const Instance& inst, const ReturnFlowTable& t, const char* u, const char* v) {
  auto r = t.at(vid(inst, u), vid(inst, v));
  if (!r) throw std::runtime_error(std::string("no return flow for ") + u + "->" + v);
  return *r;
}

// Departures along each neighbour pair during the walk from u, by simulation.
std::vector<ExtendedCount> simulated_pair_flows(const RotorGraph& g, const RotorConfig& c, VertexId u) {
  WalkOptions opt;
  opt.record_flows = true;
  auto w = run_maximal_walk(g, c, u, opt);
  std::vector<ExtendedCount> f(g.pair_count(), ExtendedCount(0));
  for (std::size_t a = 0; a < g.arc_count(); ++a) {
    VertexId t = g.tail(arc_at(a));
    f[g.pair_id(t, g.neighbor_slot(arc_at(a)))] += ExtendedCount(w.arc_flows[a]);
  }
  return f;
}

// Star around one vertex with random multiplicities and rotor order.
struct Star {
  RotorGraph graph;
  VertexId centre;
};

Star random_star(Rng& rng) {
  GraphBuilder b;
  VertexId c = b.add_vertex("c");
  std::size_t k = 1 + rng.below(5);
  std::vector<ArcId> arcs;
  for (std::size_t i = 0; i < k; ++i) {
    VertexId leaf = b.add_sink("s" + std::to_string(i));
    std::size_t m = 1 + rng.below(4);
    for (std::size_t j = 0; j < m; ++j) arcs.push_back(b.add_arc(c, leaf));
  }
  rng.shuffle(arcs);
  b.set_rotor_order(c, arcs);
  return {b.build(), c};
}

std::vector<ExtendedCount> random_return_flows(Rng& rng, std::size_t k) {
  std::vector<ExtendedCount> r(k);
  bool finite = false;
  for (auto& x : r) {
    if (rng.below(4) == 0) {
      x = inf;
    } else {
      x = ExtendedCount(1 + rng.below(rng.below(2) ? 6 : 200));
      finite = true;
    }
  }
  if (!finite) r[rng.below(k)] = ExtendedCount(1 + rng.below(10));
  return r;
}

TEST(Routine, BothVersionsAgreeOnRandomInputs) {
  Rng rng(20240611);
  for (int trial = 0; trial < 3000; ++trial) {
    Star s = random_star(rng);
    auto r = random_return_flows(rng, s.graph.out_neighbors(s.centre).size());
    auto out = s.graph.out_arcs(s.centre);
    ArcId start = out[rng.below(out.size())];
    auto a = revolving_routine(s.graph, s.centre, start, r);
    auto b = improved_revolving_routine(s.graph, s.centre, start, r);
    ASSERT_EQ(a.last_arc, b.last_arc) << trial;
    ASSERT_EQ(a.flows, b.flows) << trial;
  }
}

TEST(Routine, ImprovedVersionHandlesHugeReturnFlows) {
  GraphBuilder b;
  VertexId c = b.add_vertex("c"), x = b.add_sink("x"), y = b.add_sink("y");
  b.add_arcs(c, x, 3);
  b.add_arc(c, y);
  RotorGraph g = b.build();
  std::vector<ExtendedCount> r{pow2(300), pow2(100) + ExtendedCount(1)};
  auto res = improved_revolving_routine(g, c, arc_at(0), r);
  // The pair towards y is exhausted first: 2^100 full turns, then its last crossing.
  EXPECT_EQ(res.last_arc, arc_at(3));
  EXPECT_EQ(res.flows[1], pow2(100) + ExtendedCount(1));
  EXPECT_EQ(res.flows[0], ExtendedCount(3) * (pow2(100) + ExtendedCount(1)));
}

TEST(Routine, RejectsBadInput) {
  GraphBuilder b;
  VertexId c = b.add_vertex("c"), x = b.add_sink("x");
  b.add_arc(c, x);
  RotorGraph g = b.build();
  std::vector<ExtendedCount> all_inf{inf}, two{ExtendedCount(1), ExtendedCount(1)}, one{ExtendedCount(1)};
  EXPECT_THROW(revolving_routine(g, c, arc_at(0), all_inf), std::invalid_argument);
  EXPECT_THROW(improved_revolving_routine(g, c, arc_at(0), two), std::invalid_argument);
  EXPECT_THROW(improved_revolving_routine(g, c, kNoArc, one), std::invalid_argument);
  EXPECT_THROW(revolving_routine(g, x, arc_at(0), one), std::invalid_argument);
}

TEST(ReturnFlows, FigureFiveTable) {
  Instance inst = load_data("fig5.rotor");
  auto d = compute_destination_forest(inst.graph, inst.config);
  const std::map<std::pair<std::string, std::string>, ExtendedCount> expected{
      {{"u0", "u2"}, ExtendedCount(2)}, {{"u0", "u1"}, ExtendedCount(3)}, {{"u0", "u4"}, inf},
      {{"u1", "u0"}, ExtendedCount(2)}, {{"u1", "u3"}, ExtendedCount(2)}, {{"u2", "u0"}, ExtendedCount(4)},
      {{"u2", "s1"}, ExtendedCount(1)}, {{"u3", "u1"}, ExtendedCount(2)}, {{"u3", "s0"}, ExtendedCount(1)},
      {{"u4", "u0"}, ExtendedCount(2)}};
  ASSERT_EQ(d.table.size(), expected.size());
  for (const auto& [pair, value] : expected) {
    EXPECT_EQ(table_at(inst, d.table, pair.first.c_str(), pair.second.c_str()), value) << pair.first << "->" << pair.second;
    EXPECT_EQ(return_flow_oracle(inst.graph, inst.config, vid(inst, pair.first), vid(inst, pair.second)), value);
  }
  std::map<std::string, std::string> exits;
  for (std::size_t v = 0; v < 5; ++v) exits[inst.graph.name(vertex_at(v))] = inst.graph.name(d.exits[v]);
  EXPECT_EQ(exits, (std::map<std::string, std::string>{{"u0", "s1"}, {"u1", "s1"}, {"u2", "s1"}, {"u3", "s0"}, {"u4", "s1"}}));
}

TEST(ReturnFlows, FigureFiveSubtreeWalks) {
  Instance inst = load_data("fig5.rotor");
  auto walk_names = [&](const char* u, const char* v) {
    Subtree s = build_subtree(inst.graph, inst.config, vid(inst, u), vid(inst, v));
    WalkOptions opt;
    opt.record_trace = true;
    auto w = run_maximal_walk(s.graph, s.config, s.root, opt);
    std::vector<std::string> out;
    for (VertexId x : w.trace) out.push_back(s.graph.name(x));
    return out;
  };
  EXPECT_EQ(walk_names("u1", "u0"),
            (std::vector<std::string>{"u1", "u0", "u2", "u0", "u1", "u0", "u4", "u0", "u2", "s1"}));
  EXPECT_EQ(walk_names("u0", "u1"),
            (std::vector<std::string>{"u0", "u1", "u0", "u1", "u3", "u1", "u0", "u1", "u3", "s0"}));
  // The (u2,u0)-subtree walk crosses u2 -> u0 four times before reaching s0.
  EXPECT_EQ(walk_names("u2", "u0"),
            (std::vector<std::string>{"u2", "u0", "u2", "u0", "u1", "u0", "u4", "u0", "u2", "u0", "u1",
                                      "u3", "u1", "u0", "u4", "u0", "u2", "u0", "u1", "u3", "s0"}));
}

TEST(ReturnFlows, FigureSevenRetropropagation) {
  Instance inst = load_data("fig7.rotor");
  auto d = compute_destination_forest(inst.graph, inst.config, vid(inst, "u"));
  EXPECT_EQ(table_at(inst, d.table, "u", "v1"), ExtendedCount(4));
  EXPECT_EQ(table_at(inst, d.table, "u", "v2"), inf);
  EXPECT_EQ(table_at(inst, d.table, "u", "v3"), ExtendedCount(4));
  EXPECT_EQ(inst.arc_names[ix(d.destination[vid(inst, "u")])], "uv3b");
  EXPECT_EQ(table_at(inst, d.table, "v1", "u"), ExtendedCount(3));
  EXPECT_EQ(table_at(inst, d.table, "v2", "u"), ExtendedCount(2));
  EXPECT_EQ(table_at(inst, d.table, "v3", "u"), ExtendedCount(5));
  for (const char* v : {"v1", "v2", "v3"})
    EXPECT_EQ(return_flow_oracle(inst.graph, inst.config, vid(inst, v), vid(inst, "u")), table_at(inst, d.table, v, "u"));
  // The routine at u sees the same flows as the walk itself.
  auto sim = simulated_pair_flows(inst.graph, inst.config, vid(inst, "u"));
  const RoutineResult& at_u = d.at_vertex[ix(vid(inst, "u"))];
  for (std::size_t k = 0; k < at_u.flows.size(); ++k)
    EXPECT_EQ(at_u.flows[k], sim[inst.graph.pair_id(vid(inst, "u"), k)]);
  EXPECT_EQ(d.destination[vid(inst, "u")], arc_named(inst, "uv3b"));
}

TEST(ReturnFlows, ExponentialPathAtScale) {
  for (std::size_t n : {50u, 100u, 200u}) {
    Instance inst = exp_path(n);
    auto d = compute_destination_forest(inst.graph, inst.config);
    EXPECT_EQ(inst.graph.name(d.exits[0]), "s");
    auto flows = walk_flows(inst.graph, inst.config, d.table, vertex_at(0));
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t k = inst.graph.slot_of(vertex_at(i), vertex_at(i + 1));
      ASSERT_EQ(flows[inst.graph.pair_id(vertex_at(i), k)], pow2(static_cast<unsigned>(i + 1))) << n << " " << i;
    }
  }
}

TEST(ReturnFlows, RefusesUnsupportedGraphs) {
  Instance fig2 = load_data("fig2.rotor");
  EXPECT_THROW(compute_destination_forest(fig2.graph, fig2.config), SolverRefusal);
  GraphBuilder b;
  VertexId a = b.add_vertex("a"), c = b.add_vertex("c");
  b.add_sink("s");
  b.add_arc(a, c);
  b.add_arc(c, a);
  b.add_arc(vertex_at(2), a);  // sink out-arc: invalid
  RotorGraph g = b.build();
  EXPECT_THROW(compute_destination_forest(g, first_arc_config(g)), InvalidInstance);
}

TEST(ReturnFlows, CountersStayWithinThreeRoutineCallsPerVertex) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Instance inst = random_instance(seed, 40, 4);
    auto d = compute_destination_forest(inst.graph, inst.config);
    for (std::size_t v = 0; v < inst.graph.vertex_count(); ++v) ASSERT_LE(d.counters.routine_calls[v], 3u) << seed;
  }
}

// Production solver agrees with simulation on exits, last arcs and every pair flow.
TEST(ReturnFlowsProperty, SolverMatchesSimulation) {
  for (std::uint64_t seed = 1000; seed < 1250; ++seed) {
    Instance inst = random_instance(seed, 14, 3);
    const RotorGraph& g = inst.graph;
    auto d = compute_destination_forest(g, inst.config);
    auto pushed = destination_forest_by_pushing(g, inst.config);
    EXPECT_EQ(d.destination, pushed.forest) << seed;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      VertexId u = vertex_at(v);
      auto sim = oracle::exit_by_simulation(g, inst.config, u);
      ASSERT_TRUE(sim.sink.has_value());
      EXPECT_EQ(*sim.sink, d.exits[v]) << seed;
      EXPECT_EQ(walk_flows(g, inst.config, d.table, u), simulated_pair_flows(g, inst.config, u)) << seed << " " << v;
    }
    for (std::size_t id = 0; id < g.pair_count(); ++id) {
      auto [u, k] = g.pair_at(id);
      VertexId w = g.out_neighbors(u)[k].head;
      EXPECT_EQ(*d.table.by_pair(id), return_flow_oracle(g, inst.config, u, w)) << seed;
    }
  }
}

// The flow out of u during the walk from u, against return flows measured in subtrees.
TEST(ReturnFlowsProperty, FlowAndReturnFlowIdentities) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 2000; seed < 2250; ++seed) {
    Instance inst = random_instance(seed, 12, 3);
    const RotorGraph& g = inst.graph;
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
      VertexId u = vertex_at(x);
      if (g.is_sink(u)) continue;
      auto flows = simulated_pair_flows(g, inst.config, u);
      auto forest = destination_forest_by_pushing(g, inst.config).forest;
      VertexId dest = g.head(forest[u]);
      auto nb = g.out_neighbors(u);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        VertexId w = nb[k].head;
        ExtendedCount f = flows[g.pair_id(u, k)];
        ExtendedCount r = return_flow_oracle(g, inst.config, u, w);
        if (w == dest) {
          EXPECT_EQ(f, r) << seed;
        } else {
          EXPECT_LT(f, r) << seed;
          if (g.slot_of(w, u) != kNoSlot) {
            EXPECT_EQ(return_flow_oracle(g, inst.config, w, u), f + ExtendedCount(1)) << seed;
          }
        }
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}

// Return flow of (u,v) is at most the product of out-degrees along a path from v to a sink
// that avoids u, and infinite when there is no such path.
TEST(ReturnFlowsProperty, ReturnFlowBound) {
  for (std::uint64_t seed = 3000; seed < 3250; ++seed) {
    Instance inst = random_instance(seed, 12, 4);
    const RotorGraph& g = inst.graph;
    std::function<std::optional<ExtendedCount>(VertexId, VertexId)> best = [&](VertexId x, VertexId from) -> std::optional<ExtendedCount> {
      if (g.is_sink(x)) return ExtendedCount(1);
      std::optional<ExtendedCount> out;
      for (const auto& nb : g.out_neighbors(x)) {
        if (nb.head == from) continue;
        auto b = best(nb.head, x);
        if (b && (!out || *b < *out)) out = b;
      }
      if (out) *out = *out * ExtendedCount(g.out_degree(x));
      return out;
    };
    auto d = compute_destination_forest(g, inst.config);
    for (std::size_t id = 0; id < g.pair_count(); ++id) {
      auto [u, k] = g.pair_at(id);
      VertexId v = g.out_neighbors(u)[k].head;
      const ExtendedCount& r = *d.table.by_pair(id);
      auto bound = best(v, u);
      if (bound) {
        EXPECT_LE(r, *bound) << seed;
      } else {
        EXPECT_EQ(r, inf) << seed;
      }
    }
  }
}

}  // namespace
