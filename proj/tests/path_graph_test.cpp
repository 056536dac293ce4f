#include <gtest/gtest.h>

#include "rotor/path_graph.hpp"
#include "rotor/walk.hpp"
#include "test_support.hpp"

using namespace rotor;
using rotor::testing::load_data;

namespace {

PathInstance all_configs(std::size_t n, std::uint32_t mask) {
  std::vector<bool> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = (mask >> i) & 1u;
  return PathInstance(n, r);
}

// Routes one particle from u_i; returns the exit side and updates the path config.
PathSide route(PathInstance& p, std::size_t i) {
  auto pr = to_rotor_graph(p);
  auto w = run_maximal_walk(pr.graph, pr.config, vertex_at(i));
  p = from_rotor_graph(pr.graph, w.final_config);
  return *w.exit == vertex_at(0) ? PathSide::s0 : PathSide::s1;
}

TEST(PathGraph, FigureThree) {
  PathInstance p = PathInstance::from_string("RRLL");
  EXPECT_EQ(right_count(p), 2u);
  EXPECT_EQ(path_exit_pattern(p), (std::vector<PathSide>{PathSide::s0, PathSide::s0, PathSide::s1, PathSide::s1}));
  // The same instance read from its file, solved by simulation.
  Instance inst = load_data("fig3.rotor");
  EXPECT_EQ(from_rotor_graph(inst.graph, inst.config), p);
  for (std::size_t i = 1; i <= 4; ++i) {
    auto w = run_maximal_walk(inst.graph, inst.config, vertex_at(i));
    EXPECT_EQ(inst.graph.name(*w.exit), i <= 2 ? "s0" : "s1") << i;
  }
}

TEST(PathGraph, TextForm) {
  EXPECT_EQ(PathInstance::from_string("rl10").to_string(), "RLRL");
  EXPECT_THROW(PathInstance::from_string("RX"), std::invalid_argument);
  EXPECT_THROW(PathInstance(3, {true}), std::invalid_argument);
}

TEST(PathGraph, CanonicalRepresentativeIsTheDestinationForest) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t k = 0; k <= n; ++k) {
      PathInstance c = canonical_path(n, k);
      EXPECT_EQ(right_count(c), k);
      auto pr = to_rotor_graph(c);
      EXPECT_FALSE(find_cycle(pr.graph, pr.config).has_value());
    }
  EXPECT_THROW(canonical_path(3, 4), std::out_of_range);
}

TEST(PathGraph, IndexChecks) {
  EXPECT_THROW(class_after_routing(4, 5, 1), std::out_of_range);
  EXPECT_THROW(class_after_routing(4, 1, 0), std::out_of_range);
  EXPECT_THROW(class_after_routing(4, 1, 5), std::out_of_range);
  EXPECT_THROW(side_counts(PathInstance::from_string("RL"), 3), std::out_of_range);
  EXPECT_THROW(multi_particle_outcome(3, 1, {{4, ExtendedCount(1)}}), std::out_of_range);
  EXPECT_THROW(multi_particle_outcome(3, 1, {{1, ExtendedCount::infinity()}}), std::invalid_argument);
}

// Exit pattern, side counts and the group action agree with simulation on every config.
TEST(PathGraphProperty, ExhaustiveUpToEight) {
  for (std::size_t n = 1; n <= 8; ++n)
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const PathInstance p = all_configs(n, mask);
      const std::size_t k = right_count(p);
      auto pattern = path_exit_pattern(p);
      auto pr = to_rotor_graph(p);
      EXPECT_EQ(from_rotor_graph(pr.graph, pr.config), p);
      for (std::size_t i = 1; i <= n; ++i) {
        PathInstance q = p;
        PathSide side = route(q, i);
        ASSERT_EQ(side, pattern[i - 1]) << p.to_string() << " from u" << i;
        ASSERT_EQ(exit_by_side_counts(p, i), side) << p.to_string() << " from u" << i;
        ASSERT_EQ(right_count(q), class_after_routing(n, k, i)) << p.to_string() << " from u" << i;
        ASSERT_EQ(side == PathSide::s1, k + i >= n + 1);
      }
    }
}

TEST(PathGraphProperty, MultiParticleSmall) {
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t k = 0; k <= n; ++k)
      for (std::size_t count = 1; count <= 4; ++count) {
        std::vector<std::size_t> starts(count, 1);
        for (;;) {
          PathInstance q = canonical_path(n, k);
          std::uint64_t at_s1 = 0;
          std::vector<std::pair<std::size_t, ExtendedCount>> arg;
          for (std::size_t i : starts) {
            at_s1 += route(q, i) == PathSide::s1;
            arg.emplace_back(i, ExtendedCount(1));
          }
          auto m = multi_particle_outcome(n, k, arg);
          ASSERT_EQ(m.final_class, right_count(q));
          ASSERT_EQ(m.at_s1, ExtendedCount(at_s1));
          ASSERT_EQ(m.at_s0, ExtendedCount(count - at_s1));
          std::size_t j = 0;
          while (j < count && starts[j] == n) starts[j++] = 1;
          if (j == count) break;
          ++starts[j];
        }
      }
}

TEST(PathGraph, ManyParticlesFromOneVertex) {
  // 10^30 particles from u_3 on a path of length 7, counted exactly.
  ExtendedCount many(rotor::BigInt("1000000000000000000000000000000"));
  auto m = multi_particle_outcome(7, 2, {{3, many}});
  ExtendedCount total = ExtendedCount(2) + ExtendedCount(3) * many;
  EXPECT_EQ(m.at_s1, total / ExtendedCount(8));
  EXPECT_EQ(ExtendedCount(m.final_class), total % ExtendedCount(8));
  EXPECT_EQ(m.at_s0 + m.at_s1, many);
}

}  // namespace
