#include <gtest/gtest.h>

#include <limits>
#include <map>

#include "amsp/errors.hpp"
#include "amsp/formulation.hpp"
#include "amsp/problems.hpp"
#include "amsp/solver.hpp"

using namespace amsp;

namespace {

double solve(const LinearModel& model) {
  static auto solver = make_solver();
  const SolveOutcome out = solver->solve_milp(model, {});
  EXPECT_TRUE(out.optimal()) << to_string(out.status);
  return out.objective;
}

void expect_agree(double a, double b, const std::string& what) {
  EXPECT_TRUE(objectives_agree(a, b)) << what << ": " << a << " vs " << b;
}

// Information-set oracle: at stage t, state i may depend only on what is known at the latest
// revision stage tau <= t (stage 1 without revisions), so nodes sharing their stage-tau
// ancestor must agree.
LinearModel explicit_information_model(const AmspInstance& inst, const RevisionSchedule& r) {
  Formulation f = build_msp(inst);
  const ScenarioTree& tree = inst.tree;
  for (int i = 0; i < inst.num_states(); ++i) {
    Stage tau = 1;
    for (Stage t = 1; t <= tree.num_stages(); ++t) {
      if (t >= 2 && r.at(i, t) > r.at(i, t - 1)) tau = t;
      std::map<NodeId, NodeId> first_in_group;
      for (NodeId n : tree.stage_nodes(t)) {
        const NodeId anc = tree.path_to_root(n)[static_cast<std::size_t>(tau - 1)];
        auto [it, fresh] = first_in_group.emplace(anc, n);
        if (!fresh) {
          f.model.add_row("info", {{f.x(n, i), 1.0}, {f.x(it->second, i), -1.0}}, RowSense::eq,
                          0.0);
        }
      }
    }
  }
  return f.model;
}

LotSizingData two_stage_chain() {
  LotSizingData d;
  d.num_sources = 1;
  d.setup_cost = {{100.0}, {100.0}};
  d.production_cost = {{2.0}, {10.0}};
  d.holding_cost = {1.0, 1.0};
  d.demand = {10.0, 5.0};
  return d;
}

}  // namespace

TEST(Formulation, HandComputedChain) {
  // Producing 15 up front costs 100 + 30 + 5 holding; producing twice costs 270.
  const AmspInstance inst = build_lotsizing(ScenarioTree::uniform(2, 1), two_stage_chain());
  expect_agree(solve(build_msp(inst).model), 135.0, "msp");
  expect_agree(solve(build_2sp(inst).model), 135.0, "2sp");
  expect_agree(solve(build_ams(inst).model), 135.0, "ams");
}

TEST(Formulation, ZeroDemandCostsNothing) {
  LotSizingData d = sample_lotsizing(ScenarioTree::uniform(3, 2), 2, 4);
  for (double& v : d.demand) v = 0.0;
  AmspInstance inst = build_lotsizing(ScenarioTree::uniform(3, 2), d, 1);
  EXPECT_NEAR(solve(build_ams(inst).model), 0.0, 1e-9);
}

TEST(Formulation, Dimensions) {
  const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(2, 2), 1, 1, 1);
  const Formulation msp = build_msp(inst);
  EXPECT_EQ(msp.model.num_variables(), 9);
  EXPECT_EQ(msp.model.num_rows(), 6);
  EXPECT_FALSE(msp.has_revisions());
  const Formulation ams = build_ams(inst, {NacRegime::full});
  EXPECT_EQ(ams.model.num_variables(), 11);
  EXPECT_EQ(ams.nacs.size(), 2u);
  EXPECT_EQ(ams.nac_rows.size(), ams.nacs.size());
  const Formulation two = build_2sp(inst);
  EXPECT_EQ(two.model.num_rows(), 7);
  const AmspInstance gep = gen_gep(ScenarioTree::uniform(2, 2), 1, {}, 1);
  const Formulation g = build_msp(gep);
  EXPECT_EQ(g.model.num_variables(), 3 * (5 + 5 * 4 + 4));
  EXPECT_EQ(g.model.num_integer(), 3 * 5);
}

TEST(Formulation, OrderingEndpointsAndRegimes) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    for (auto [T, I] : {std::pair{3, 1}, {4, 1}, {3, 2}}) {
      AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(T, 2), I, seed);
      const double z2 = solve(build_2sp(inst).model);
      const double zm = solve(build_msp(inst).model);
      EXPECT_GE(z2, zm - objective_tolerance(z2, zm));
      double previous = std::numeric_limits<double>::infinity();
      for (int mu = 0; mu < T; ++mu) {
        inst.mu = mu;
        const double full = solve(build_ams(inst, {NacRegime::full}).model);
        const double reduced = solve(build_ams(inst, {NacRegime::reduced}).model);
        const std::string tag = "seed " + std::to_string(seed) + " T " + std::to_string(T) +
                                " I " + std::to_string(I) + " mu " + std::to_string(mu);
        expect_agree(full, reduced, "full vs reduced " + tag);
        expect_agree(solve(build_ams(inst, {NacRegime::prop56}).model), full, "prop56 " + tag);
        EXPECT_LE(reduced, previous + objective_tolerance(reduced, previous)) << tag;
        EXPECT_LE(reduced, z2 + objective_tolerance(reduced, z2)) << tag;
        EXPECT_GE(reduced, zm - objective_tolerance(reduced, zm)) << tag;
        if (mu == 0) expect_agree(reduced, z2, "mu=0 " + tag);
        if (mu == T - 1) expect_agree(reduced, zm, "mu=T-1 " + tag);
        previous = reduced;
      }
    }
  }
}

TEST(Formulation, ForcedFullRevisionsAndRelaxedCountersKeepOptimum) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (int mu = 0; mu < 4; ++mu) {
      const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(4, 2), 2, seed, mu);
      const double base = solve(build_ams(inst).model);
      expect_agree(solve(build_ams(inst, {NacRegime::reduced, false, true}).model), base,
                   "forced");
      expect_agree(solve(build_ams(inst, {NacRegime::reduced, true, false}).model), base,
                   "relaxed r");
    }
  }
}

TEST(Formulation, FixedRevisionsMatchInformationOracle) {
  // Full NACs encode the information structure of any schedule. Reduced NACs do so for
  // schedules using the whole budget; below it they relax, but never under the padded schedule.
  auto check = [](const AmspInstance& inst, const RevisionSchedule& r) {
    const double oracle = solve(explicit_information_model(inst, r));
    const double reduced = solve(fix_revisions(inst, r, false).model);
    expect_agree(solve(fix_revisions(inst, r, false, NacRegime::full).model), oracle,
                 "full " + r.to_string());
    const RevisionSchedule padded = pad_revisions(r, inst.mu);
    if (padded == r) {
      expect_agree(reduced, oracle, "reduced " + r.to_string());
    } else {
      EXPECT_LE(reduced, oracle + objective_tolerance(reduced, oracle)) << r.to_string();
      const double padded_oracle = solve(explicit_information_model(inst, padded));
      EXPECT_LE(padded_oracle, reduced + objective_tolerance(reduced, padded_oracle))
          << r.to_string() << " padded " << padded.to_string();
    }
  };
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    for (int mu = 0; mu < 4; ++mu) {
      const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(4, 2), 1, seed, mu);
      for (const RevisionSchedule& r : enumerate_schedules(1, 4, mu, false)) check(inst, r);
    }
  }
  const AmspInstance two = gen_lotsizing(ScenarioTree::uniform(3, 2), 2, 8, 1);
  for (const RevisionSchedule& r : enumerate_schedules(2, 3, 1, false)) check(two, r);
}

TEST(Formulation, AmsEqualsBestFixedSchedule) {
  const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(4, 2), 1, 6, 2);
  double best = std::numeric_limits<double>::infinity();
  for (const RevisionSchedule& r : enumerate_schedules(1, 4, 2, false)) {
    best = std::min(best, solve(fix_revisions(inst, r, false).model));
  }
  auto solver = make_solver();
  const Formulation ams = build_ams(inst);
  const SolveOutcome out = solver->solve_milp(ams.model, {});
  ASSERT_TRUE(out.optimal());
  expect_agree(out.objective, best, "min over schedules");
  const RevisionSchedule chosen = ams.schedule(out.primal);
  EXPECT_TRUE(chosen.is_valid(2));
  expect_agree(solve(fix_revisions(inst, chosen, false).model), best, "chosen schedule");
}

TEST(Formulation, RelaxedSubproblemBoundsInteger) {
  const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(4, 2), 2, 3, 2);
  auto solver = make_solver();
  for (const RevisionSchedule& r : enumerate_schedules(2, 4, 2, true)) {
    const SolveOutcome lp = solver->solve_lp_with_duals(fix_revisions(inst, r, true).model, {});
    ASSERT_TRUE(lp.optimal());
    EXPECT_LE(lp.objective, solve(fix_revisions(inst, r, false).model) + 1e-6);
  }
}

TEST(Formulation, FixRevisionsRejectsBadSchedules) {
  const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(4, 2), 1, 1, 1);
  EXPECT_THROW(fix_revisions(inst, RevisionSchedule::from_revision_stages(4, {{2, 3}}), false),
               ParameterError);
  EXPECT_THROW(fix_revisions(inst, RevisionSchedule(2, 4), false), ParameterError);
  EXPECT_THROW(fix_revisions(inst, RevisionSchedule(1, 3), false), ParameterError);
}

TEST(Vams, Cases) {
  EXPECT_DOUBLE_EQ(vams(100.0, 50.0, 0.0).percent, 50.0);
  EXPECT_DOUBLE_EQ(vams(100.0, 100.0, 0.0).percent, 0.0);
  EXPECT_DOUBLE_EQ(vams(100.0, 0.0, 0.0).percent, 100.0);
  EXPECT_FALSE(vams(100.0, 50.0, 0.0).degenerate);
  const Vams flat = vams(42.0, 42.0, 42.0);
  EXPECT_TRUE(flat.degenerate);
  EXPECT_DOUBLE_EQ(flat.percent, 100.0);
  EXPECT_DOUBLE_EQ(vams(100.0, 100.0 + 1e-6, 0.0).percent, 0.0);
  EXPECT_THROW(vams(100.0, 101.0, 0.0), InconsistencyError);
  EXPECT_THROW(vams(100.0, 50.0, 60.0), InconsistencyError);
}

TEST(Vams, ObjectiveTolerance) {
  EXPECT_DOUBLE_EQ(objective_tolerance(0.0, 0.0), 1e-6);
  EXPECT_DOUBLE_EQ(objective_tolerance(1e6, -2e6), 2.0);
  EXPECT_TRUE(objectives_agree(1e9, 1e9 + 500.0));
  EXPECT_FALSE(objectives_agree(1.0, 1.0 + 2e-6));
}
