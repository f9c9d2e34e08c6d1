#include <gtest/gtest.h>

#include <limits>
#include <map>
#include <sstream>

#include "amsp/decomposition.hpp"
#include "amsp/errors.hpp"
#include "amsp/problems.hpp"

using namespace amsp;

namespace {

struct Oracle {
  std::map<RevisionSchedule, double> q;        // Q(r)
  std::map<RevisionSchedule, double> q_lower;  // relaxed subproblem value
};

Oracle brute_force(const AmspInstance& inst, Solver& solver) {
  Oracle o;
  for (const RevisionSchedule& r :
       enumerate_schedules(inst.num_states(), inst.num_stages(), inst.mu, false)) {
    const SolveOutcome q = solver.solve_milp(fix_revisions(inst, r, false).model, {});
    const SolveOutcome ql = solver.solve_lp_with_duals(fix_revisions(inst, r, true).model, {});
    EXPECT_TRUE(q.optimal() && ql.optimal());
    o.q[r] = q.objective;
    o.q_lower[r] = ql.objective;
  }
  return o;
}

double direct(const AmspInstance& inst, Solver& solver) {
  const SolveOutcome out = solver.solve_milp(build_ams(inst).model, {});
  EXPECT_TRUE(out.optimal());
  return out.objective;
}

double tol(double a) { return 1e-7 * std::max(1.0, std::abs(a)); }

}  // namespace

TEST(LShapedCut, TightAtGeneratorAndBelowBoundElsewhere) {
  const int T = 5;
  const double L = 10.0;
  const double Q = 25.0;
  for (int mu = 0; mu < T; ++mu) {
    const auto all = enumerate_schedules(2, T, mu, false);
    for (std::size_t g = 0; g < all.size(); g += 7) {
      const Cut cut = lshaped_cut(all[g], Q, L);
      EXPECT_EQ(cut.kind, CutKind::lshaped);
      EXPECT_DOUBLE_EQ(cut.theta_coef, 1.0);
      for (const RevisionSchedule& r : all) {
        if (r == all[g]) {
          EXPECT_NEAR(cut.rhs(r), Q, 1e-12);
        } else {
          EXPECT_LE(cut.rhs(r), L + 1e-12) << r.to_string() << " from " << all[g].to_string();
        }
      }
    }
  }
}

TEST(LShapedCut, ClampsRoundingNoiseAndRejectsInconsistency) {
  const RevisionSchedule r = RevisionSchedule::from_revision_stages(3, {{2}});
  const Cut c = lshaped_cut(r, 100.0 - 1e-7, 100.0);
  EXPECT_DOUBLE_EQ(c.generator_value, 100.0);
  EXPECT_TRUE(c.terms.empty());
  EXPECT_DOUBLE_EQ(c.rhs(r), 100.0);
  EXPECT_THROW(lshaped_cut(r, 90.0, 100.0), InconsistencyError);
}

TEST(CutValidity, BruteForceOverAllSchedules) {
  auto solver = make_solver();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (auto [T, I, mu] : {std::tuple{3, 2, 1}, {4, 1, 2}, {4, 1, 1}, {4, 2, 1}}) {
      const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(T, 2), I, seed, mu);
      const Oracle o = brute_force(inst, *solver);
      const double L = solver->solve_milp(build_msp(inst).model, {}).objective;
      for (const auto& [rbar, qbar] : o.q) {
        const Cut ls = lshaped_cut(rbar, qbar, L);
        const Formulation rsp = fix_revisions(inst, rbar, true);
        const SolveOutcome lp = solver->solve_lp_with_duals(rsp.model, {});
        const Cut bd = benders_cut(rsp, lp, rbar);
        EXPECT_NEAR(bd.rhs(rbar), o.q_lower.at(rbar), tol(qbar));
        EXPECT_NEAR(ls.rhs(rbar), qbar, tol(qbar));
        for (const auto& [r, q] : o.q) {
          EXPECT_LE(ls.rhs(r), q + tol(q)) << "L-shaped " << rbar.to_string() << " at "
                                           << r.to_string();
          EXPECT_LE(bd.rhs(r), o.q_lower.at(r) + tol(q))
              << "Benders " << rbar.to_string() << " at " << r.to_string();
        }
      }
    }
  }
}

TEST(BendersCut, NeedsDuals) {
  const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(3, 2), 1, 1, 1);
  const RevisionSchedule r(1, 3);
  const Formulation rsp = fix_revisions(inst, r, true);
  SolveOutcome bogus;
  bogus.status = SolveStatus::optimal;
  EXPECT_THROW(benders_cut(rsp, bogus, r), SolverError);
}

TEST(HeuristicCuts, CountsStartAndErrors) {
  auto solver = make_solver();
  const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(5, 2), 2, 2, 2);
  for (int h = 1; h <= 4; ++h) {
    const HeuristicCuts hc = heuristic_cuts(inst, h, *solver, {});
    EXPECT_EQ(hc.cuts.size(), static_cast<std::size_t>(2 * (5 - h)));
    ASSERT_TRUE(hc.start.has_value());
    EXPECT_TRUE(hc.start->is_valid(2));
    for (const Cut& c : hc.cuts) {
      EXPECT_EQ(c.kind, CutKind::heuristic);
      EXPECT_TRUE(c.satisfied(*hc.start, 0.0));
    }
  }
  EXPECT_THROW(heuristic_cuts(inst, 0, *solver, {}), ParameterError);
  EXPECT_THROW(heuristic_cuts(inst, 5, *solver, {}), ParameterError);
}

TEST(Master, WithoutCutsReturnsLowerBound) {
  auto solver = make_solver();
  const std::vector<Cut> none;
  const MasterResult m = solve_master(2, 4, 2, 42.0, {&none}, *solver, {});
  ASSERT_EQ(m.status, SolveStatus::optimal);
  EXPECT_NEAR(m.lb, 42.0, 1e-9);
  EXPECT_TRUE(m.schedule.is_valid(2));
}

TEST(Master, RespectsCuts) {
  auto solver = make_solver();
  // Exclude every schedule but "revise at 3" with L-shaped cuts carrying a large Q.
  const auto all = enumerate_schedules(1, 4, 1, false);
  std::vector<Cut> cuts;
  const RevisionSchedule target = RevisionSchedule::from_revision_stages(4, {{3}});
  for (const RevisionSchedule& r : all) {
    cuts.push_back(lshaped_cut(r, r == target ? 5.0 : 50.0, 0.0));
  }
  const MasterResult m = solve_master(1, 4, 1, 0.0, {&cuts}, *solver, {}, &all.front());
  ASSERT_EQ(m.status, SolveStatus::optimal);
  EXPECT_EQ(m.schedule, target);
  EXPECT_NEAR(m.lb, 5.0, 1e-9);
}

TEST(Decomposition, ExactModeMatchesDirectSolve) {
  auto solver = make_solver();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (auto [T, I, mu] : {std::tuple{3, 1, 1}, {4, 1, 2}, {4, 2, 1}, {5, 1, 2}}) {
      const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(T, 2), I, seed, mu);
      const double z = direct(inst, *solver);
      const DecompositionState s = run_decomposition(inst, DecompositionConfig::exact(), *solver);
      ASSERT_EQ(s.status, DecompositionStatus::converged) << s.warning;
      EXPECT_LE(std::abs(s.ub - z), 1e-3 * std::max(1.0, std::abs(z)));
      EXPECT_GE(s.ub, z - tol(z));
      EXPECT_LT(s.gap(), 1e-3);
      ASSERT_TRUE(s.incumbent.has_value());
      EXPECT_TRUE(s.incumbent->is_valid(mu));
      EXPECT_TRUE(s.heuristic.empty());
      for (std::size_t k = 1; k < s.log.size(); ++k) {
        EXPECT_GE(s.log[k].lb, s.log[k - 1].lb);
        EXPECT_LE(s.log[k].ub, s.log[k - 1].ub);
      }
      EXPECT_EQ(s.lshaped.size() + 0, static_cast<std::size_t>(s.log.back().lshaped_cuts));
    }
  }
}

TEST(Decomposition, SingleRevisionUpperBoundIsBestSchedule) {
  auto solver = make_solver();
  const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(5, 2), 1, 4, 1);
  double best = std::numeric_limits<double>::infinity();
  for (const RevisionSchedule& r : enumerate_schedules(1, 5, 1, false)) {
    best = std::min(best, solver->solve_milp(fix_revisions(inst, r, false).model, {}).objective);
  }
  const DecompositionState s = run_decomposition(inst, DecompositionConfig::exact(), *solver);
  ASSERT_EQ(s.status, DecompositionStatus::converged);
  EXPECT_LE(std::abs(s.ub - best), 1e-3 * std::abs(best));
  EXPECT_GE(s.ub, best - tol(best));
}

TEST(Decomposition, HeuristicModeStaysFeasible) {
  auto solver = make_solver();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(5, 2), 2, seed, 2);
    const double z = direct(inst, *solver);
    const DecompositionState s = run_decomposition(inst, DecompositionConfig{}, *solver);
    ASSERT_TRUE(s.incumbent.has_value()) << s.warning;
    EXPECT_GE(s.ub, z - tol(z));
    EXPECT_NEAR(solver->solve_milp(fix_revisions(inst, *s.incumbent, false).model, {}).objective,
                s.ub, tol(s.ub));
  }
}

TEST(Decomposition, LimitsAndLog) {
  auto solver = make_solver();
  const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(5, 2), 2, 1, 3);
  DecompositionConfig one = DecompositionConfig::exact();
  one.max_iterations = 1;
  const DecompositionState s = run_decomposition(inst, one, *solver);
  EXPECT_TRUE(s.status == DecompositionStatus::iteration_limit ||
              s.status == DecompositionStatus::converged);
  EXPECT_EQ(s.log.size(), 1u);
  std::ostringstream os;
  s.write_log_csv(os);
  EXPECT_EQ(os.str().rfind("iteration,lb,ub,rub,gap,lshaped_cuts,benders_cuts,heuristic_cuts,"
                           "wall_seconds,schedule\n",
                           0),
            0u);

  DecompositionState blank;
  EXPECT_EQ(blank.gap(), kInfinity);
  blank.lb = 90.0;
  blank.ub = 100.0;
  EXPECT_NEAR(blank.gap(), 0.1, 1e-12);
}
