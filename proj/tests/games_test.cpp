#include <gtest/gtest.h>

#include "rotor/games.hpp"
#include "rotor/oracle.hpp"
#include "test_support.hpp"

using namespace rotor;
using rotor::testing::arc_named;
using rotor::testing::load_data;
using rotor::testing::random_instance;
using rotor::testing::vid;

namespace {

oracle::EnumerationBudget small_budget(std::uint64_t strategies) {
  oracle::EnumerationBudget b;
  b.max_strategy_count = strategies;
  return b;
}

TEST(Games, FigureTen) {
  Instance inst = load_data("fig10.rotor");
  GameSpec game = inst.game();
  auto sol = solve_one_player_binary(game, vid(inst, "u0"));
  EXPECT_EQ(sol.value, 1);
  EXPECT_EQ(sol.max_strategy[vid(inst, "u2")], arc_named(inst, "u2u3"));
  EXPECT_EQ(sol.max_strategy[vid(inst, "u4")], arc_named(inst, "u4u0"));
  EXPECT_EQ(value_under_strategies(game, sol.max_strategy, Strategy(), vid(inst, "u0")), 1);
  auto e = oracle::enumerate_one_player(game, vid(inst, "u0"));
  EXPECT_EQ(e.value, 1);
  ASSERT_EQ(e.argmax.size(), 1u);
  EXPECT_EQ(e.argmax[0][vid(inst, "u2")], arc_named(inst, "u2u3"));
  EXPECT_EQ(e.argmax[0][vid(inst, "u4")], arc_named(inst, "u4u0"));
}

TEST(Games, FigureNineIntegerValue) {
  Instance inst = load_data("fig9.rotor");
  auto sol = solve_one_player_integer(inst.game(), vid(inst, "u0"));
  EXPECT_EQ(sol.value, 2);
  EXPECT_GE(sol.probes, 1u);
  EXPECT_EQ(value_under_strategies(inst.game(), sol.max_strategy, Strategy(), vid(inst, "u0")), 2);
  EXPECT_EQ(oracle::enumerate_one_player(inst.game(), vid(inst, "u0")).value, 2);
}

TEST(Games, FigureThirteenIntegerValue) {
  Instance inst = load_data("fig13.rotor");
  EXPECT_EQ(solve_one_player_integer(inst.game(), vid(inst, "u0")).value, 2);
}

TEST(Games, FigureEightChoiceDependsOnTheStart) {
  Instance inst = load_data("fig8.rotor");
  GameSpec game = inst.game();
  auto from_u = solve_one_player_binary(game, vid(inst, "u"));
  auto from_v = solve_one_player_binary(game, vid(inst, "v"));
  EXPECT_EQ(from_u.value, 1);
  EXPECT_EQ(from_v.value, 1);
  EXPECT_EQ(from_u.max_strategy[vid(inst, "g")], arc_named(inst, "gu"));
  EXPECT_EQ(from_v.max_strategy[vid(inst, "g")], arc_named(inst, "gv"));
  // Neither choice works from both starts.
  for (const auto& s : {from_u.max_strategy, from_v.max_strategy}) {
    int total = value_under_strategies(game, s, Strategy(), vid(inst, "u")) + value_under_strategies(game, s, Strategy(), vid(inst, "v"));
    EXPECT_EQ(total, 1);
  }
}

TEST(Games, FigureTwelveHasNoPureEquilibrium) {
  Instance inst = load_data("fig12.rotor");
  GameSpec game = inst.game();
  EXPECT_FALSE(is_tree_like(inst.graph));
  EXPECT_THROW(solve_two_player_binary(game, vid(inst, "max")), SolverRefusal);
  auto e = oracle::enumerate_two_player(game, vid(inst, "max"));
  EXPECT_EQ(e.maximin, 0);
  EXPECT_EQ(e.minimax, 1);
}

TEST(Games, InputChecks) {
  Instance inst = load_data("fig9.rotor");
  EXPECT_THROW(solve_one_player_binary(inst.game(), vid(inst, "u0")), InvalidInstance);
  inst.owner[ix(vid(inst, "u"))] = Owner::min;
  EXPECT_THROW(solve_one_player_integer(inst.game(), vid(inst, "u0")), InvalidInstance);
  GameSpec bad = inst.game();
  bad.owner.pop_back();
  EXPECT_THROW(validate_game(bad), InvalidInstance);
}

TEST(Games, ThresholdGame) {
  Instance inst = load_data("fig9.rotor");
  GameSpec t = threshold_game(inst.game(), 2);
  EXPECT_EQ(t.sink_value[ix(vid(inst, "two"))], 1);
  EXPECT_EQ(t.sink_value[ix(vid(inst, "one"))], 0);
  EXPECT_EQ(t.sink_value[ix(vid(inst, "zero"))], 0);
}

TEST(Games, ClosedComponentsCountAsZero) {
  // MAX at m can go to a closed pair or to a 1-sink; the rotor at m first points at the pair.
  GraphBuilder b;
  VertexId m = b.add_vertex("m"), p = b.add_vertex("p"), q = b.add_vertex("q"), one = b.add_sink("one");
  b.add_arc(m, p);
  b.add_arc(m, one);
  b.add_arc(p, q);
  b.add_arc(q, p);
  RotorGraph g = b.build();
  Instance inst = make_instance(g, first_arc_config(g));
  inst.owner[ix(m)] = Owner::max;
  inst.sink_value[ix(one)] = 1;
  GameSpec game = inst.game();
  auto prepared = prepare_game(game);
  EXPECT_LT(prepared.game.graph.vertex_count(), g.vertex_count());
  auto sol = solve_one_player_binary(game, m);
  EXPECT_EQ(sol.value, 1);
  EXPECT_EQ(sol.max_strategy[m], arc_at(1));
  Strategy bad(g.vertex_count());
  bad.set(m, arc_at(0));
  EXPECT_EQ(value_under_strategies(game, bad, Strategy(), m), 0);
}

// One-player binary and integer values against full enumeration.
TEST(GamesProperty, OnePlayerMatchesEnumeration) {
  std::size_t games = 0;
  for (std::uint64_t seed = 0; games < 200; ++seed) {
    Instance inst = random_instance(seed, 9, 3, 0.35, 0.0, seed % 2 ? 1 : 5);
    GameSpec game = inst.game();
    VertexId u0 = vertex_at(0);
    oracle::OnePlayerEnumeration e;
    try {
      e = oracle::enumerate_one_player(game, u0, small_budget(4096));
    } catch (const CapExceeded&) {
      continue;
    }
    ++games;
    auto sol = seed % 2 ? solve_one_player_binary(game, u0) : solve_one_player_integer(game, u0);
    ASSERT_EQ(sol.value, e.value) << "seed " << seed;
    ASSERT_EQ(value_under_strategies(game, sol.max_strategy, Strategy(), u0), e.value) << "seed " << seed;
  }
}

// Values are a pure equilibrium: neither player gains by switching alone.
TEST(GamesProperty, TwoPlayerMatchesEnumeration) {
  std::size_t games = 0;
  for (std::uint64_t seed = 0; games < 120; ++seed) {
    Instance inst = random_instance(seed + 50000, 9, 3, 0.3, 0.3, seed % 2 ? 1 : 4);
    GameSpec game = inst.game();
    VertexId u0 = vertex_at(0);
    oracle::TwoPlayerEnumeration e;
    try {
      e = oracle::enumerate_two_player(game, u0, small_budget(1024));
    } catch (const CapExceeded&) {
      continue;
    }
    ++games;
    auto sol = seed % 2 ? solve_two_player_binary(game, u0) : solve_two_player_integer(game, u0);
    ASSERT_EQ(e.maximin, e.minimax) << seed;
    ASSERT_EQ(sol.value, e.maximin) << seed;
    if (seed % 2) {
      ASSERT_EQ(oracle::min_against(game, sol.max_strategy, u0), sol.value) << seed;
      ASSERT_EQ(oracle::max_against(game, sol.min_strategy, u0), sol.value) << seed;
    }
  }
}

TEST(GamesProperty, FreeRotorOrderMatchesEnumeration) {
  std::size_t games = 0, with_orders = 0;
  for (std::uint64_t seed = 0; games < 200; ++seed) {
    Instance inst = random_instance(seed + 90000, 7, 3, 0.35, 0.0, seed % 2 ? 1 : 4);
    GameSpec game = inst.game();
    VertexId u0 = vertex_at(0);
    std::int64_t expected;
    try {
      expected = oracle::enumerate_free_rotor_order(game, u0, small_budget(50000));
    } catch (const CapExceeded&) {
      continue;
    }
    ++games;
    auto sol = seed % 2 ? solve_one_player_binary(game, u0, GameVariant::free_rotor_order)
                        : solve_one_player_integer(game, u0, GameVariant::free_rotor_order);
    ASSERT_EQ(sol.value, expected) << seed;
    // The chosen orders and rotors reach the value.
    auto orders = inst.graph.rotor_orders();
    RotorConfig c = combine(game, sol.max_strategy, Strategy());
    std::size_t reordered = 0;
    for (std::size_t v = 0; v < orders.size(); ++v) {
      // Vertices the solver never reached keep their drawn order.
      if (!game.owned(vertex_at(v)) || sol.chosen_orders[v].empty()) continue;
      ASSERT_EQ(sol.chosen_orders[v].size(), orders[v].size()) << seed;
      orders[v] = sol.chosen_orders[v];
      ++reordered;
    }
    if (reordered) ++with_orders;
    RotorGraph h(inst.graph.names(), inst.graph.roles(), inst.graph.arcs(), orders);
    auto w = run_maximal_walk(h, c, u0);
    ASSERT_EQ(w.exit ? inst.sink_value[ix(*w.exit)] : 0, expected) << seed;
  }
  EXPECT_GT(with_orders, 100u);
}

TEST(GamesProperty, PerVisitMatchesStateSearch) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Instance inst = random_instance(seed + 120000, 8, 3, 0.35, 0.0, seed % 2 ? 1 : 4);
    GameSpec game = inst.game();
    VertexId u0 = vertex_at(0);
    std::int64_t expected = oracle::per_visit_value(game, u0);
    auto sol = seed % 2 ? solve_one_player_binary(game, u0, GameVariant::free_per_visit)
                        : solve_one_player_integer(game, u0, GameVariant::free_per_visit);
    ASSERT_EQ(sol.value, expected) << seed;
  }
}

TEST(GamesProperty, VariantsAreOrderedByPower) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Instance inst = random_instance(seed + 150000, 10, 3, 0.35, 0.0, 4);
    GameSpec game = inst.game();
    VertexId u0 = vertex_at(0);
    auto a = solve_one_player_integer(game, u0, GameVariant::positional).value;
    auto b = solve_one_player_integer(game, u0, GameVariant::free_rotor_order).value;
    auto c = solve_one_player_integer(game, u0, GameVariant::free_per_visit).value;
    ASSERT_LE(a, b) << seed;
    ASSERT_LE(b, c) << seed;
  }
}

}  // namespace
