#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "amsp/errors.hpp"
#include "amsp/formulation.hpp"
#include "amsp/problems.hpp"
#include "amsp/solver.hpp"

using namespace amsp;

TEST(Prng, TransformsOfTheStandardEngine) {
  std::mt19937_64 engine(5489);
  Prng rng(5489);
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(rng.uniform01(), static_cast<double>(engine() >> 11) / 9007199254740992.0);
  }
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 reference;
  reference.discard(9999);
  EXPECT_EQ(reference(), 9981545732273789042ull);
}

TEST(Prng, MomentsAndRange) {
  Prng rng(123);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  double u_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    u_sum += u;
    const double z = rng.normal(2.0, 3.0);
    ASSERT_TRUE(std::isfinite(z));
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_NEAR(u_sum / n, 0.5, 0.005);
  EXPECT_NEAR(mean, 2.0, 0.03);
  EXPECT_NEAR(std::sqrt(var), 3.0, 0.03);
  Prng a(9);
  Prng b(9);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(a.normal(0, 1), b.normal(0, 1));
}

TEST(LotSizing, ReproducibleAndInRange) {
  const ScenarioTree tree = ScenarioTree::uniform(4, 3);
  const LotSizingData a = sample_lotsizing(tree, 2, 77);
  const LotSizingData b = sample_lotsizing(tree, 2, 77);
  const LotSizingData c = sample_lotsizing(tree, 2, 78);
  EXPECT_EQ(a.demand, b.demand);
  EXPECT_EQ(a.setup_cost, b.setup_cost);
  EXPECT_NE(a.demand, c.demand);
  ASSERT_EQ(a.demand.size(), 40u);
  for (std::size_t n = 0; n < 40; ++n) {
    EXPECT_GE(a.demand[n], 0.0);
    EXPECT_LT(a.demand[n], 200.0);
    EXPECT_GE(a.holding_cost[n], 0.0);
    EXPECT_LT(a.holding_cost[n], 5.0);
    ASSERT_EQ(a.setup_cost[n].size(), 2u);
    for (int i = 0; i < 2; ++i) {
      EXPECT_GE(a.setup_cost[n][i], 100.0);
      EXPECT_LT(a.setup_cost[n][i], 250.0);
      EXPECT_GE(a.production_cost[n][i], 0.0);
      EXPECT_LT(a.production_cost[n][i], 5.0);
    }
  }
  // Draw order: per node, (alpha, beta) per source, then h, then d.
  Prng rng(77);
  const double alpha0 = rng.uniform(100.0, 250.0);
  const double beta0 = rng.uniform(0.0, 5.0);
  EXPECT_EQ(a.setup_cost[0][0], alpha0);
  EXPECT_EQ(a.production_cost[0][0], beta0);
  EXPECT_THROW(sample_lotsizing(tree, 0, 1), ParameterError);
}

TEST(LotSizing, BigMIsLongestDemandTail) {
  const ScenarioTree tree = ScenarioTree::uniform(4, 2);
  const LotSizingData d = sample_lotsizing(tree, 1, 5);
  const std::vector<double> m = lotsizing_big_m(tree, d.demand);
  std::function<double(NodeId)> tail = [&](NodeId n) {
    double best = 0.0;
    if (tree.stage(n) < tree.num_stages()) {
      for (NodeId c : tree.children(n).to_vector()) best = std::max(best, tail(c));
    }
    return d.demand[static_cast<std::size_t>(n - 1)] + best;
  };
  for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
    EXPECT_DOUBLE_EQ(m[static_cast<std::size_t>(n - 1)], tail(n));
  }
}

TEST(LotSizing, InstanceStructure) {
  const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(3, 2), 2, 1, 1);
  EXPECT_EQ(inst.name, "lotsizing-seed1");
  EXPECT_EQ(inst.num_states(), 2);
  EXPECT_EQ(inst.num_stage_vars(), 3);
  for (const StateVarSpec& s : inst.state_vars) {
    EXPECT_TRUE(s.integer);
    EXPECT_EQ(s.upper, 1.0);
    EXPECT_EQ(s.big_m, 1.0);
  }
  for (NodeId n = 1; n <= 7; ++n) {
    const auto& rows = inst.node(n).rows;
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].sense, RowSense::eq);
    EXPECT_EQ(rows[0].terms.size(), n == 1 ? 3u : 4u);
  }
  LotSizingData bad = sample_lotsizing(ScenarioTree::uniform(3, 2), 1, 1);
  bad.demand[2] = -1.0;
  EXPECT_THROW(build_lotsizing(ScenarioTree::uniform(3, 2), bad), ParameterError);
  bad.demand.pop_back();
  EXPECT_THROW(build_lotsizing(ScenarioTree::uniform(3, 2), bad), ParameterError);
}

TEST(LotSizing, SolutionsMeetDemand) {
  auto solver = make_solver();
  const ScenarioTree tree = ScenarioTree::uniform(3, 2);
  const LotSizingData d = sample_lotsizing(tree, 2, 11);
  const Formulation f = build_ams(build_lotsizing(tree, d, 1));
  const SolveOutcome out = solver->solve_milp(f.model, {});
  ASSERT_TRUE(out.optimal());
  for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
    const double inventory_in =
        n == 1 ? 0.0 : out.primal[static_cast<std::size_t>(f.y(tree.parent(n), 2))];
    const double produced = out.primal[static_cast<std::size_t>(f.y(n, 0))] +
                            out.primal[static_cast<std::size_t>(f.y(n, 1))];
    const double inventory_out = out.primal[static_cast<std::size_t>(f.y(n, 2))];
    EXPECT_NEAR(inventory_in + produced - inventory_out, d.demand[static_cast<std::size_t>(n - 1)],
                1e-6);
    for (int i = 0; i < 2; ++i) {
      if (out.primal[static_cast<std::size_t>(f.y(n, i))] > 1e-6) {
        EXPECT_NEAR(out.primal[static_cast<std::size_t>(f.x(n, i))], 1.0, 1e-6);
      }
    }
  }
}

TEST(Gep, DefaultsAndValidation) {
  const GepOptions o;
  ASSERT_EQ(o.generators.size(), 5u);
  EXPECT_EQ(o.resolved_initial_units(), (std::vector<int>{3, 0, 0, 0, 0}));
  EXPECT_NO_THROW(o.validate());
  GepOptions bad = o;
  bad.subperiod_shares[0] = 0.5;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = o;
  bad.generators[2].cf_mean = 1.5;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = o;
  bad.initial_units = {1, 2};
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = o;
  bad.unserved_penalty = -1.0;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = o;
  bad.build_limit = -1;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = o;
  bad.generators.clear();
  EXPECT_THROW(bad.validate(), ParameterError);
}

TEST(Gep, SingleYearCoefficients) {
  GepOptions o;
  o.interest_rate = 0.0;
  const ScenarioTree tree = ScenarioTree::uniform(1, 1);
  const GepData data = sample_gep(tree, o, 3);
  const AmspInstance inst = build_gep(tree, o, data);
  const NodeData& root = inst.node(1);
  EXPECT_NEAR(root.state_cost[0], (1084.0 + 14.1) * 1000.0 * 418.0, 1e-3);
  EXPECT_NEAR(root.state_cost[3], (4375.0 + 110.0) * 1000.0 * 400.0, 1e-3);
  EXPECT_NEAR(root.stage_cost[0], (2.6 + 40.0) * 0.55 * 8760.0, 1e-6);
  EXPECT_NEAR(root.stage_cost[2 * 4 + 1], 0.0, 1e-12);
  EXPECT_NEAR(root.stage_cost[5 * 4 + 3], 10000.0 * 0.0005 * 8760.0, 1e-6);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(data.demand[0][k], o.subperiod_weights[k] * 1000.0);
    EXPECT_DOUBLE_EQ(data.capacity_factor[0][0][k], 1.0);
  }
  // Capacity row: y_ik - cap * l * x_i <= cap * l * x0_i.
  const NodeRow& cap_row = root.rows[0];
  EXPECT_EQ(cap_row.sense, RowSense::leq);
  EXPECT_DOUBLE_EQ(cap_row.rhs, 418.0 * 3.0);
  ASSERT_EQ(cap_row.terms.size(), 2u);
  EXPECT_DOUBLE_EQ(cap_row.terms[1].coef, -418.0);
}

TEST(Gep, DiscountingAndEscalation) {
  const GepOptions o;
  const ScenarioTree tree = ScenarioTree::uniform(3, 2);
  const AmspInstance inst = gen_gep(tree, 1, o);
  EXPECT_EQ(inst.name, "gep-seed1");
  const double d2 = 1.0 / 1.05;
  const double d3 = 1.0 / (1.05 * 1.05);
  // Capture-equipped combined cycle at stage 2 (node 2) and stage 3 (node 4).
  EXPECT_NEAR(inst.node(2).state_cost[1],
              d2 * (2481.0 * 0.95 + 27.6 + 27.6 / 1.05) * 1000.0 * 377.0, 1e-2);
  EXPECT_NEAR(inst.node(4).state_cost[1], d3 * (2481.0 * 0.95 * 0.95 + 27.6) * 1000.0 * 377.0,
              1e-2);
  EXPECT_NEAR(inst.node(4).stage_cost[0], d3 * (2.6 + 40.0) * 1.21 * 0.55 * 8760.0, 1e-6);
  // Capacity rows sum builds along the whole root path.
  EXPECT_EQ(inst.node(4).rows[0].terms.size(), 4u);
}

TEST(Gep, SamplingReproducibleClampedAndGrowing) {
  const GepOptions o;
  const ScenarioTree tree = ScenarioTree::uniform(5, 3);
  const GepData a = sample_gep(tree, o, 21);
  const GepData b = sample_gep(tree, o, 21);
  EXPECT_EQ(a.demand, b.demand);
  EXPECT_EQ(a.capacity_factor, b.capacity_factor);
  EXPECT_GT(a.clamped_samples, 0);
  double growth_sum = 0.0;
  int growth_count = 0;
  for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
    const auto c = static_cast<std::size_t>(n - 1);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_GE(a.capacity_factor[c][i][k], 0.0);
        EXPECT_LE(a.capacity_factor[c][i][k], 1.0);
        if (i < 2) EXPECT_EQ(a.capacity_factor[c][i][k], 1.0);
      }
    }
    if (n == 1) continue;
    const auto p = static_cast<std::size_t>(tree.parent(n) - 1);
    for (std::size_t k = 0; k < 4; ++k) {
      growth_sum += a.demand[c][k] / a.demand[p][k] - 1.0;
      ++growth_count;
    }
  }
  EXPECT_NEAR(growth_sum / growth_count, 0.05, 4.0 * 0.05 / std::sqrt(growth_count));
}

TEST(Gep, LargePenaltyServesAllDemand) {
  GepOptions o;
  o.unserved_penalty = 1e7;
  const ScenarioTree tree = ScenarioTree::uniform(3, 2);
  const GepData data = sample_gep(tree, o, 2);
  const Formulation f = build_msp(build_gep(tree, o, data));
  auto solver = make_solver();
  const SolveOutcome out = solver->solve_milp(f.model, {});
  ASSERT_TRUE(out.optimal());
  for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
    for (int k = 0; k < 4; ++k) {
      double served = 0.0;
      for (int i = 0; i < 5; ++i) served += out.primal[static_cast<std::size_t>(f.y(n, i * 4 + k))];
      EXPECT_NEAR(out.primal[static_cast<std::size_t>(f.y(n, 20 + k))], 0.0, 1e-6);
      EXPECT_GE(served, data.demand[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)] -
                            1e-6);
    }
  }
}
