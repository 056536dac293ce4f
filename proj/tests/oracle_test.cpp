#include <gtest/gtest.h>

#include "rotor/oracle.hpp"
#include "test_support.hpp"

using namespace rotor;
using rotor::testing::load_data;
using rotor::testing::vid;

namespace {

TEST(Oracle, SimulatedExitOnFigureTwo) {
  Instance inst = load_data("fig2.rotor");
  auto e = oracle::exit_by_simulation(inst.graph, inst.config, vid(inst, "u2"));
  ASSERT_TRUE(e.sink.has_value());
  EXPECT_EQ(inst.graph.name(*e.sink), "s2");
  EXPECT_FALSE(e.trapped || e.cap_hit);
  EXPECT_EQ(e.steps, ExtendedCount(7));
}

TEST(Oracle, StepBudgetIsHonoured) {
  Instance inst = exp_path(10);
  oracle::EnumerationBudget b;
  b.max_steps = 100;
  auto e = oracle::exit_by_simulation(inst.graph, inst.config, *inst.start, b);
  EXPECT_TRUE(e.cap_hit);
  EXPECT_FALSE(e.sink.has_value());
  EXPECT_THROW(oracle::exit_pattern_by_simulation(inst.graph, inst.config, b), CapExceeded);
}

TEST(Oracle, TrappedVerticesHaveNoExit) {
  GraphBuilder b;
  VertexId c = b.add_vertex("c"), p = b.add_vertex("p"), q = b.add_vertex("q"), s = b.add_sink("s");
  b.add_arc(c, p);
  b.add_arc(c, s);
  b.add_arc(p, q);
  b.add_arc(q, p);
  RotorGraph g = b.build();
  auto pattern = oracle::exit_pattern_by_simulation(g, first_arc_config(g));
  EXPECT_FALSE(pattern[ix(c)].has_value());
  EXPECT_FALSE(pattern[ix(p)].has_value());
  EXPECT_EQ(pattern[ix(s)], s);
  RotorConfig other = first_arc_config(g);
  other.set(c, arc_at(1));
  EXPECT_EQ(oracle::exit_pattern_by_simulation(g, other)[ix(c)], s);
}

TEST(Oracle, StrategySpaceCap) {
  Instance inst = load_data("fig8.rotor");
  oracle::EnumerationBudget b;
  b.max_strategy_count = 1;
  EXPECT_THROW(oracle::enumerate_one_player(inst.game(), vid(inst, "u"), b), CapExceeded);
  std::uint64_t product = 1;
  for (std::size_t v = 0; v < inst.graph.vertex_count(); ++v)
    if (inst.owner[v] == Owner::max) product *= inst.graph.out_neighbors(vertex_at(v)).size();
  EXPECT_GT(product, 1u);
  EXPECT_EQ(oracle::enumerate_one_player(inst.game(), vid(inst, "u")).strategies, product);
}

TEST(Oracle, PerVisitIsOnePlayerOnly) {
  Instance inst = load_data("fig9.rotor");
  inst.owner[ix(vid(inst, "u"))] = Owner::min;
  EXPECT_THROW(oracle::per_visit_value(inst.game(), vid(inst, "u0")), InvalidInstance);
}

TEST(Oracle, FigureNineVariants) {
  Instance inst = load_data("fig9.rotor");
  GameSpec game = inst.game();
  VertexId u0 = vid(inst, "u0");
  EXPECT_EQ(oracle::enumerate_one_player(game, u0).value, 2);
  EXPECT_GE(oracle::enumerate_free_rotor_order(game, u0), 2);
  EXPECT_GE(oracle::per_visit_value(game, u0), oracle::enumerate_free_rotor_order(game, u0));
}

TEST(Oracle, TwoPlayerWithoutChoicesIsAPlainWalk) {
  Instance inst = load_data("fig2.rotor");
  GameSpec game = inst.game();
  auto e = oracle::enumerate_two_player(game, vid(inst, "u2"));
  EXPECT_EQ(e.maximin, e.minimax);
  auto w = run_maximal_walk(inst.graph, inst.config, vid(inst, "u2"));
  EXPECT_EQ(e.maximin, inst.sink_value[ix(*w.exit)]);
}

TEST(Oracle, ReturnFlowReferenceOnExponentialPath) {
  // From u0 the walk returns to u0 from u1 twice before leaving for good.
  Instance inst = exp_path(1);
  EXPECT_EQ(oracle::return_flow_reference(inst.graph, inst.config, vertex_at(1), vertex_at(0)),
            return_flow_oracle(inst.graph, inst.config, vertex_at(1), vertex_at(0)));
}

}  // namespace
