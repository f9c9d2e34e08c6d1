#include <gtest/gtest.h>

#include <map>
#include <set>
#include <tuple>

#include "amsp/errors.hpp"
#include "amsp/nac.hpp"

using namespace amsp;

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t v = 1;
  while (e-- > 0) v *= b;
  return v;
}

// Ordered pairs of distinct same-stage nodes that share their ancestor at stage ta.
NacCountMatrix brute_force_full(const ScenarioTree& tree) {
  const int T = tree.num_stages();
  NacCountMatrix m(T);
  for (Stage t = 2; t <= T; ++t) {
    for (NodeId a : tree.stage_nodes(t)) {
      for (NodeId b : tree.stage_nodes(t)) {
        if (a == b) continue;
        const auto pa = tree.path_to_root(a);
        const auto pb = tree.path_to_root(b);
        for (Stage ta = 1; ta < t; ++ta) {
          if (pa[static_cast<std::size_t>(ta - 1)] == pb[static_cast<std::size_t>(ta - 1)]) {
            m.set(ta, t, m.at(ta, t) + 1);
          }
        }
      }
    }
  }
  return m;
}

const std::vector<double> kUnitM{1.0};

}  // namespace

TEST(NacCounts, FullFormulationTotalsFromPaperTable) {
  const std::vector<std::uint64_t> b2 = {522, 2346, 10026, 41642, 170154, 688810};
  const std::vector<std::uint64_t> b3 = {10464, 97458, 889152, 8045016, 72552768, 653476830};
  for (int T = 5; T <= 10; ++T) {
    EXPECT_EQ(count_total(T, 2, NacRegime::full, 0, 1), b2[static_cast<std::size_t>(T - 5)]) << T;
    EXPECT_EQ(count_total(T, 3, NacRegime::full, 0, 1), b3[static_cast<std::size_t>(T - 5)]) << T;
  }
}

TEST(NacCounts, ReducedFormulationTotalsFromPaperTable) {
  const std::map<std::tuple<int, int, int>, std::uint64_t> expected = {
      {{2, 2, 5}, 44},    {{2, 2, 6}, 106},   {{2, 2, 7}, 232},   {{2, 2, 8}, 486},
      {{2, 2, 9}, 996},   {{2, 2, 10}, 2018}, {{2, 4, 5}, 0},     {{2, 4, 6}, 62},
      {{2, 4, 7}, 188},   {{2, 4, 8}, 442},   {{2, 4, 9}, 952},   {{2, 4, 10}, 1974},
      {{3, 2, 5}, 159},   {{3, 2, 6}, 522},   {{3, 2, 7}, 1614},  {{3, 2, 8}, 4893},
      {{3, 2, 9}, 14733}, {{3, 2, 10}, 44256}, {{3, 4, 5}, 0},    {{3, 4, 6}, 363},
      {{3, 4, 7}, 1455},  {{3, 4, 8}, 4734},  {{3, 4, 9}, 14574}, {{3, 4, 10}, 44097},
  };
  for (const auto& [key, total] : expected) {
    const auto [B, mu, T] = key;
    EXPECT_EQ(count_total(T, B, NacRegime::reduced, mu, 1), total)
        << "B=" << B << " mu=" << mu << " T=" << T;
  }
}

TEST(NacCounts, FullCellsTenStagesTwoBranches) {
  const NacCountMatrix m = count_cells(10, 2, NacRegime::full, 0);
  // Exact cells printed in the per-cell table (larger entries are printed rounded).
  const std::vector<std::vector<std::uint64_t>> printed = {
      {2, 12, 56, 240, 992, 4032},
      {4, 24, 112, 480, 1984, 8064},
      {8, 48, 224, 960, 3968},
      {16, 96, 448, 1920, 7936},
      {32, 192, 896, 3840},
      {64, 384, 1792, 7680},
      {128, 768, 3584},
      {256, 1536},
      {512},
  };
  for (Stage ta = 1; ta <= 9; ++ta) {
    const auto& row = printed[static_cast<std::size_t>(ta - 1)];
    for (std::size_t k = 0; k < row.size(); ++k) {
      EXPECT_EQ(m.at(ta, ta + 1 + static_cast<Stage>(k)), row[k]) << ta << "," << ta + 1 + k;
    }
  }
  // Rounded entries: 1.6e4, 6.5e4, 2.6e5 in the first row.
  EXPECT_NEAR(static_cast<double>(m.at(1, 8)), 1.6e4, 0.05e4);
  EXPECT_NEAR(static_cast<double>(m.at(1, 9)), 6.5e4, 0.05e4);
  EXPECT_NEAR(static_cast<double>(m.at(1, 10)), 2.6e5, 0.05e5);
  for (Stage ta = 1; ta <= 9; ++ta) {
    for (Stage t = ta + 1; t <= 10; ++t) {
      const std::uint64_t w = ipow(2, t - ta);
      EXPECT_EQ(m.at(ta, t), ipow(2, ta - 1) * w * (w - 1));
    }
  }
  EXPECT_EQ(m.total(), 688810u);
}

TEST(NacCounts, PartialEliminationCellsTenStagesTwoBranches) {
  const NacCountMatrix p5 = count_cells(10, 2, NacRegime::prop5, 0);
  const NacCountMatrix p56 = count_cells(10, 2, NacRegime::prop56, 0);
  const NacCountMatrix red = count_cells(10, 2, NacRegime::reduced, 4);
  for (Stage ta = 1; ta <= 9; ++ta) {
    for (Stage t = ta + 1; t <= 10; ++t) {
      EXPECT_EQ(p5.at(ta, t), ipow(2, t - 1));
      EXPECT_EQ(p56.at(ta, t), ipow(2, ta));
      EXPECT_EQ(red.at(ta, t), t - ta <= 5 ? ipow(2, ta) : 0u) << ta << "," << t;
    }
  }
  EXPECT_EQ(p5.total(), 8194u);
  EXPECT_EQ(p56.total(), 2026u);
  EXPECT_EQ(red.total(), 1974u);
}

TEST(NacCounts, EliminatedByRevisionBudget) {
  const std::vector<std::uint64_t> eliminated = {2, 8, 22, 52, 114, 240, 494, 1004};
  const std::uint64_t base = count_total(10, 2, NacRegime::prop56, 0, 1);
  for (int mu = 1; mu <= 8; ++mu) {
    EXPECT_EQ(base - count_total(10, 2, NacRegime::reduced, mu, 1),
              eliminated[static_cast<std::size_t>(mu - 1)])
        << "mu=" << mu;
  }
}

TEST(NacCounts, DegenerateCases) {
  for (NacRegime r : {NacRegime::full, NacRegime::prop5, NacRegime::prop56, NacRegime::reduced}) {
    EXPECT_EQ(count_total(6, 1, r, 1, 3), 0u) << to_string(r);
    EXPECT_EQ(count_total(1, 4, r, 0, 1), 0u) << to_string(r);
  }
  for (int T = 2; T <= 8; ++T) {
    EXPECT_EQ(count_total(T, 3, NacRegime::reduced, T - 1, 1), 0u);
  }
  EXPECT_EQ(count_total(5, 2, NacRegime::reduced, 2, 3), 3u * 44u);
}

TEST(NacCounts, ParameterErrors) {
  EXPECT_THROW(count_total(5, 2, NacRegime::reduced, 5, 1), ParameterError);
  EXPECT_THROW(count_total(5, 2, NacRegime::reduced, -1, 1), ParameterError);
  EXPECT_THROW(count_total(0, 2, NacRegime::full, 0, 1), ParameterError);
  EXPECT_THROW(count_total(5, 0, NacRegime::full, 0, 1), ParameterError);
  EXPECT_THROW(count_total(30, 3, NacRegime::full, 0, 1000), ParameterError);  // overflow
}

TEST(NacWindow, MatchesRule) {
  // T=10, mu=4: t' - ta <= 5.
  EXPECT_EQ(ancestor_window(10, 4, 10).first, 5);
  EXPECT_EQ(ancestor_window(10, 4, 10).last, 10);
  EXPECT_EQ(ancestor_window(10, 4, 3).first, 1);
  EXPECT_TRUE(ancestor_window(5, 4, 5).empty());
  EXPECT_TRUE(ancestor_window(5, 0, 5).contains(1));
}

TEST(NacRegimeNames, RoundTrip) {
  for (NacRegime r : {NacRegime::full, NacRegime::prop5, NacRegime::prop56, NacRegime::reduced}) {
    EXPECT_EQ(parse_nac_regime(to_string(r)), r);
  }
  EXPECT_EQ(parse_nac_regime("reduced"), NacRegime::reduced);
  EXPECT_THROW(parse_nac_regime("bogus"), ParameterError);
}

TEST(NacGeneration, FullMatchesBruteForcePairs) {
  for (auto [T, B] : {std::pair{4, 2}, {5, 2}, {4, 3}}) {
    const ScenarioTree tree = ScenarioTree::uniform(T, B);
    const NacCountMatrix oracle = brute_force_full(tree);
    const NacCountMatrix enumerated = tally(generate_full_nacs(tree, 0, kUnitM), T);
    const NacCountMatrix closed = count_cells(T, B, NacRegime::full, 0);
    for (Stage ta = 1; ta < T; ++ta) {
      for (Stage t = ta + 1; t <= T; ++t) {
        EXPECT_EQ(enumerated.at(ta, t), oracle.at(ta, t));
        EXPECT_EQ(closed.at(ta, t), oracle.at(ta, t));
      }
    }
  }
}

TEST(NacGeneration, EnumerationMatchesClosedFormEverywhere) {
  for (int T = 1; T <= 6; ++T) {
    for (int B = 1; B <= 3; ++B) {
      const ScenarioTree tree = ScenarioTree::uniform(T, B);
      for (int mu = 0; mu < T; ++mu) {
        for (NacRegime r :
             {NacRegime::full, NacRegime::prop5, NacRegime::prop56, NacRegime::reduced}) {
          const NacSet set = generate_nacs(tree, r, mu, kUnitM);
          const NacCountMatrix a = tally(set, T);
          const NacCountMatrix b = count_cells(T, B, r, mu);
          EXPECT_EQ(set.size(), b.total());
          for (Stage ta = 1; ta < T; ++ta) {
            for (Stage t = ta + 1; t <= T; ++t) EXPECT_EQ(a.at(ta, t), b.at(ta, t));
          }
        }
      }
    }
  }
}

TEST(NacGeneration, ConstraintsAreWellFormed) {
  const ScenarioTree tree = ScenarioTree::uniform(5, 3);
  const std::vector<double> big_m{1.0, 20.0};
  for (NacRegime r : {NacRegime::full, NacRegime::prop5, NacRegime::prop56, NacRegime::reduced}) {
    const NacSet set = generate_nacs(tree, r, 2, big_m);
    std::set<std::tuple<int, NodeId, NodeId, Stage, int>> seen;
    for (const NacConstraint& c : set.constraints) {
      ASSERT_TRUE(c.state == 0 || c.state == 1);
      EXPECT_DOUBLE_EQ(c.big_m, big_m[static_cast<std::size_t>(c.state)]);
      EXPECT_NE(c.left, c.right);
      EXPECT_EQ(tree.stage(c.left), c.stage);
      EXPECT_EQ(tree.stage(c.right), c.stage);
      EXPECT_LT(c.ancestor_stage, c.stage);
      // Both nodes descend from the same stage-ta ancestor.
      EXPECT_EQ(tree.path_to_root(c.left)[static_cast<std::size_t>(c.ancestor_stage - 1)],
                tree.path_to_root(c.right)[static_cast<std::size_t>(c.ancestor_stage - 1)]);
      if (r == NacRegime::prop56 || r == NacRegime::reduced) {
        EXPECT_EQ(tree.lca_stage(c.left, c.right), c.ancestor_stage);
      }
      if (r == NacRegime::reduced) {
        EXPECT_TRUE(ancestor_window(5, 2, c.stage).contains(c.ancestor_stage));
      }
      EXPECT_TRUE(seen.insert({c.state, c.left, c.right, c.ancestor_stage,
                               static_cast<int>(c.direction)})
                      .second);
    }
  }
}

TEST(NacGeneration, CyclicChainsConnectEverySubtree) {
  // prop5: within each stage-ta subtree at stage t', the pairs form one cycle over all nodes.
  const ScenarioTree tree = ScenarioTree::uniform(4, 3);
  const NacSet set = generate_nacs(tree, NacRegime::prop5, 0, kUnitM);
  std::map<std::pair<Stage, Stage>, std::map<NodeId, int>> out_degree;
  for (const NacConstraint& c : set.constraints) {
    if (c.direction == NacDirection::geq) ++out_degree[{c.ancestor_stage, c.stage}][c.left];
  }
  for (const auto& [cell, degrees] : out_degree) {
    EXPECT_EQ(static_cast<int>(degrees.size()), tree.stage_nodes(cell.second).size);
    for (const auto& [node, d] : degrees) EXPECT_EQ(d, 1);
  }
}

TEST(NacGeneration, RejectsBadInputs) {
  const ScenarioTree tree = ScenarioTree::uniform(3, 2);
  EXPECT_THROW(generate_nacs(tree, NacRegime::reduced, 3, kUnitM), ParameterError);
  EXPECT_THROW(generate_nacs(tree, NacRegime::reduced, 1, std::vector<double>{0.0}), ParameterError);
  EXPECT_EQ(generate_nacs(tree, NacRegime::full, 0, std::vector<double>{}).size(), 0u);
}
