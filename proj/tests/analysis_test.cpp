// Copyright 2026 The conga Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "conga/analysis.hpp"

#include <random>

#include "gtest/gtest.h"
#include "testing/oracles.hpp"

namespace conga {
namespace {

using testing::poly;

NonatomicGame pigou(double demand = 1.0) {
  return NonatomicGame(testing::parallel_pair(poly({1}), poly({0, 1})), demand);
}

TEST(PriceOfAnarchyTest, Pigou) {
  const auto r = price_of_anarchy(pigou());
  EXPECT_EQ(r.regime, Regime::kNonatomic);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.equilibrium_cost, 1.0, 1e-9);
  EXPECT_NEAR(r.optimum_cost, 0.75, 1e-9);
  EXPECT_NEAR(r.ratio, 4.0 / 3.0, 1e-6);
}

TEST(PriceOfAnarchyTest, BraessAndSymmetric) {
  const auto b = price_of_anarchy(NonatomicGame(testing::braess_graph(), 1.0));
  EXPECT_NEAR(b.ratio, 2.0 / 1.5, 1e-6);
  const auto s = price_of_anarchy(NonatomicGame(testing::two_branch_graph(), 1.0));
  EXPECT_NEAR(s.ratio, 1.0, 1e-9);
}

TEST(PriceOfAnarchyTest, ZeroCostGameHasRatioOne) {
  const NonatomicGame zero(testing::parallel_pair(poly({0}), poly({0})), 1.0);
  EXPECT_EQ(price_of_anarchy(zero).ratio, 1.0);
}

TEST(PriceOfAnarchyTest, OptimumZeroWithPositiveEquilibriumFails) {
  try {
    detail::cost_ratio(1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOptimumIsZero);
  }
}

TEST(PriceOfAnarchyTest, AtomicRegime) {
  // Two players on Pigou's network: the Nash profile puts them apart
  // (costs 1 and 1), which is also optimal.
  const AtomicGame game(testing::parallel_pair(poly({1}), poly({0, 1})), 2);
  const auto r = price_of_anarchy(game);
  EXPECT_EQ(r.regime, Regime::kAtomic);
  EXPECT_DOUBLE_EQ(r.equilibrium_cost, 2.0);
  EXPECT_DOUBLE_EQ(r.optimum_cost, 2.0);
  EXPECT_DOUBLE_EQ(r.ratio, 1.0);
  EXPECT_DOUBLE_EQ(r.optimum_makespan, 1.0);

  // Braess with one player: the shortcut costs 0 versus 1 on the others.
  const AtomicGame single(testing::braess_graph(), 1);
  const auto s = price_of_anarchy(single);
  EXPECT_DOUBLE_EQ(s.equilibrium_cost, 2.0);
  EXPECT_DOUBLE_EQ(s.optimum_cost, 2.0);
}

TEST(PriceOfAnarchyTest, AtomicRatioAtLeastOne) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> players(1, 3);
  for (int i = 0; i < 50; ++i) {
    const AtomicGame game(testing::random_graph(rng, {.max_paths = 5}), players(rng));
    const auto r = price_of_anarchy(game);
    if (r.optimum_cost > 0.0) {
      EXPECT_GE(r.ratio, 1.0 - 1e-12) << i;
    }
    EXPECT_GE(r.equilibrium_makespan, r.optimum_makespan - 1e-12) << i;
  }
}

TEST(BraessScanTest, ShortcutRemovalHelps) {
  const auto r = braess_scan(NonatomicGame(testing::braess_graph(), 1.0));
  EXPECT_NEAR(r.baseline_latency, 2.0, 1e-9);
  EXPECT_NEAR(r.baseline_system_cost, 2.0, 1e-9);
  ASSERT_EQ(r.entries.size(), 5u);
  const auto& top = r.entries.front();
  EXPECT_EQ(top.label, "BC");
  EXPECT_TRUE(top.paradox);
  EXPECT_FALSE(top.disconnected);
  EXPECT_NEAR(top.removed_latency, 1.5, 1e-6);
  EXPECT_NEAR(top.improvement, 0.5, 1e-6);
  for (std::size_t i = 1; i < r.entries.size(); ++i) {
    EXPECT_FALSE(r.entries[i].paradox) << r.entries[i].label;
    EXPECT_NEAR(r.entries[i].removed_latency, 2.0, 1e-6) << r.entries[i].label;
  }
}

TEST(BraessScanTest, NoParadoxOnParallelLinks) {
  const auto r = braess_scan(NonatomicGame(testing::two_branch_graph(), 1.0));
  for (const auto& e : r.entries) {
    EXPECT_FALSE(e.paradox) << e.label;
    EXPECT_LE(e.improvement, 1e-9) << e.label;
  }
}

TEST(BraessScanTest, DisconnectingEdgesListedLast) {
  const NonatomicGame chain(
      make_info_graph({},
                      {{"A", "B", "AB", poly({0, 1})},
                       {"B", "C", "BC1", poly({1})},
                       {"B", "C", "BC2", poly({0, 2})}},
                      "A", "C"),
      1.0);
  const auto r = braess_scan(chain);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_EQ(r.entries.back().label, "AB");
  EXPECT_TRUE(r.entries.back().disconnected);
  EXPECT_FALSE(r.entries.back().paradox);
}

TEST(BraessScanTest, ParallelAndSequentialAgree) {
  const NonatomicGame game(testing::braess_graph(), 1.0);
  BraessConfig sequential;
  sequential.parallel = false;
  EXPECT_EQ(braess_scan(game), braess_scan(game, sequential));
}

TEST(NodeProfileTest, DividesByHeadSpeed) {
  const auto g = testing::two_branch_graph();
  const NodeProfile p{"fast", {{"B", 2.0}}};
  const auto scaled = apply_node_profile(g, p);
  EXPECT_EQ(scaled.edge(*scaled.find_edge("AB")).latency, poly({0, 0.5}));
  EXPECT_EQ(scaled.edge(*scaled.find_edge("AC")).latency, poly({0, 1}));
  EXPECT_EQ(scaled.edge(*scaled.find_edge("BD")).latency, poly({0}));
  const auto tail = apply_node_profile(g, p, SpeedAt::kTail);
  EXPECT_EQ(tail.edge(*tail.find_edge("AB")).latency, poly({0, 1}));
  EXPECT_EQ(apply_node_profile(g, NodeProfile{"uniform", {}}), g);
}

TEST(NodeProfileTest, Errors) {
  const auto g = testing::two_branch_graph();
  try {
    apply_node_profile(g, NodeProfile{"x", {{"Z", 2.0}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownNode);
  }
  for (double bad : {0.0, -1.0, std::numeric_limits<double>::infinity()}) {
    try {
      apply_node_profile(g, NodeProfile{"x", {{"B", bad}}});
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidSpeed);
    }
  }
}

TEST(CompareScenariosTest, FasterBranchAttractsFlow) {
  const NonatomicGame game(testing::two_branch_graph(), 1.0);
  const auto cmp = compare_scenarios(
      game, {NodeProfile{"uniform", {}}, NodeProfile{"fastB", {{"B", 2.0}}},
             NodeProfile{"bad", {{"Q", 1.0}}}});
  ASSERT_EQ(cmp.rows.size(), 3u);
  EXPECT_EQ(cmp.rows[0].name, "uniform");
  EXPECT_NEAR(cmp.rows[0].equilibrium_latency, 0.5, 1e-9);
  EXPECT_EQ(cmp.rows[1].name, "fastB");
  EXPECT_TRUE(cmp.rows[1].converged);
  EXPECT_NEAR(cmp.rows[1].flow[*game.graph().find_edge("AB")], 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(cmp.rows[1].equilibrium_latency, 1.0 / 3.0, 1e-6);
  EXPECT_NE(cmp.rows[2].error.find("UnknownNode"), std::string::npos);
  EXPECT_FALSE(cmp.rows[2].converged);
}

TEST(CompareScenariosTest, UniformSpeedupScalesLatency) {
  // Speeding every node up by s divides every latency, and thus the common
  // equilibrium latency, by s while leaving the flow unchanged.
  std::mt19937_64 rng(42);
  for (int i = 0; i < 30; ++i) {
    const NonatomicGame game(testing::random_graph(rng, {.strictly_increasing = true}), 1.0);
    NodeProfile fast{"fast", {}};
    for (const auto& n : game.graph().nodes()) fast.speed[n] = 4.0;
    ScenarioConfig config;
    config.parallel = false;
    const auto cmp = compare_scenarios(game, {NodeProfile{"uniform", {}}, fast}, config);
    EXPECT_NEAR(cmp.rows[1].equilibrium_latency, cmp.rows[0].equilibrium_latency / 4.0, 1e-6)
        << i;
    for (std::size_t e = 0; e < game.graph().num_edges(); ++e) {
      EXPECT_NEAR(cmp.rows[1].flow[e], cmp.rows[0].flow[e], 1e-4) << i;
    }
  }
}

}  // namespace
}  // namespace conga
