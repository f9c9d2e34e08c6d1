#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "amsp/errors.hpp"
#include "amsp/solver.hpp"

using namespace amsp;

namespace {

// min -x - 2y  s.t.  x + y <= 4,  x + 3y <= 6,  x, y >= 0.  Optimum (3, 1), z = -5.
LinearModel small_lp(double rhs0 = 4.0, double rhs1 = 6.0) {
  LinearModel m;
  const VarId x = m.add_variable("x", 0, kInfinity, false, -1.0);
  const VarId y = m.add_variable("y", 0, kInfinity, false, -2.0);
  m.add_row("a", {{x, 1}, {y, 1}}, RowSense::leq, rhs0);
  m.add_row("b", {{x, 1}, {y, 3}}, RowSense::leq, rhs1);
  return m;
}

LinearModel random_lp(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.5, 3.0);
  LinearModel m;
  for (int j = 0; j < 4; ++j) m.add_variable("v" + std::to_string(j), 0, 10, false, u(rng));
  for (int r = 0; r < 3; ++r) {
    std::vector<LinearTerm> terms;
    for (int j = 0; j < 4; ++j) terms.push_back({j, u(rng)});
    m.add_row("c" + std::to_string(r), terms, RowSense::geq, 2.0 + u(rng));
  }
  m.add_row("e", {{0, 1.0}, {1, -1.0}}, RowSense::eq, 0.25);
  m.add_row("l", {{2, 1.0}, {3, 1.0}}, RowSense::leq, 6.0);
  return m;
}

}  // namespace

TEST(Solver, FactoryListsHighs) {
  const auto names = available_solvers();
  ASSERT_FALSE(names.empty());
  EXPECT_EQ(names.front(), "highs");
  EXPECT_EQ(make_solver()->name(), "highs");
  EXPECT_THROW(make_solver("no-such-engine"), SolverError);
}

TEST(Solver, HandLpPrimalAndDuals) {
  auto solver = make_solver();
  const LinearModel m = small_lp();
  const SolveOutcome out = solver->solve_lp_with_duals(m, {});
  ASSERT_TRUE(out.optimal());
  EXPECT_NEAR(out.objective, -5.0, 1e-9);
  EXPECT_NEAR(out.primal[0], 3.0, 1e-9);
  EXPECT_NEAR(out.primal[1], 1.0, 1e-9);
  ASSERT_TRUE(out.has_duals());
  EXPECT_NEAR(out.duals[0], -0.5, 1e-9);
  EXPECT_NEAR(out.duals[1], -0.5, 1e-9);
  EXPECT_NEAR(dual_objective(m, out), -5.0, 1e-9);
}

TEST(Solver, DualsAreObjectiveSensitivities) {
  auto solver = make_solver();
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const LinearModel m = random_lp(rng);
    const SolveOutcome base = solver->solve_lp_with_duals(m, {});
    ASSERT_TRUE(base.optimal());
    EXPECT_NEAR(dual_objective(m, base), base.objective, 1e-7);
    for (int r = 0; r < m.num_rows(); ++r) {
      const double h = 1e-4;
      LinearModel up = m;
      up.row(r).rhs += h;
      const SolveOutcome shifted = solver->solve_lp_with_duals(up, {});
      ASSERT_TRUE(shifted.optimal());
      // One-sided difference; degenerate vertices can make the two sides differ.
      LinearModel down = m;
      down.row(r).rhs -= h;
      const SolveOutcome lowered = solver->solve_lp_with_duals(down, {});
      ASSERT_TRUE(lowered.optimal());
      const double fwd = (shifted.objective - base.objective) / h;
      const double bwd = (base.objective - lowered.objective) / h;
      const double lo = std::min(fwd, bwd) - 1e-4;
      const double hi = std::max(fwd, bwd) + 1e-4;
      EXPECT_GE(base.duals[static_cast<std::size_t>(r)], lo) << "row " << r;
      EXPECT_LE(base.duals[static_cast<std::size_t>(r)], hi) << "row " << r;
    }
  }
}

TEST(Solver, MilpMatchesEnumeration) {
  auto solver = make_solver();
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coef(1, 6);
  for (int trial = 0; trial < 15; ++trial) {
    LinearModel m;
    int c[3];
    int a[2][3];
    int b[2];
    for (int j = 0; j < 3; ++j) {
      c[j] = coef(rng);
      m.add_variable("z" + std::to_string(j), 0, 3, true, -c[j]);
    }
    for (int r = 0; r < 2; ++r) {
      std::vector<LinearTerm> terms;
      for (int j = 0; j < 3; ++j) {
        a[r][j] = coef(rng);
        terms.push_back({j, static_cast<double>(a[r][j])});
      }
      b[r] = coef(rng) + 4;
      m.add_row("k" + std::to_string(r), terms, RowSense::leq, b[r]);
    }
    int best = 0;
    for (int z0 = 0; z0 <= 3; ++z0) {
      for (int z1 = 0; z1 <= 3; ++z1) {
        for (int z2 = 0; z2 <= 3; ++z2) {
          const int z[3] = {z0, z1, z2};
          bool ok = true;
          for (int r = 0; r < 2; ++r) {
            ok = ok && a[r][0] * z0 + a[r][1] * z1 + a[r][2] * z2 <= b[r];
          }
          if (ok) best = std::min(best, -(c[0] * z[0] + c[1] * z[1] + c[2] * z[2]));
        }
      }
    }
    const SolveOutcome out = solver->solve_milp(m, {});
    ASSERT_TRUE(out.optimal());
    EXPECT_NEAR(out.objective, best, 1e-6) << "trial " << trial;
    EXPECT_LE(m.max_violation(out.primal), 1e-6);
    for (double v : out.primal) EXPECT_NEAR(v, std::round(v), 1e-6);

    SolveOptions warm;
    warm.warm_start = out.primal;
    EXPECT_NEAR(solver->solve_milp(m, warm).objective, best, 1e-6);

    const SolveOutcome relaxed = solver->solve_lp_with_duals(m, {});
    ASSERT_TRUE(relaxed.optimal());
    EXPECT_LE(relaxed.objective, best + 1e-9);
  }
}

TEST(Solver, ReportsInfeasibleAndUnbounded) {
  auto solver = make_solver();
  LinearModel infeasible;
  const VarId x = infeasible.add_variable("x", 0, kInfinity, false, 1.0);
  infeasible.add_row("lo", {{x, 1}}, RowSense::geq, 2.0);
  infeasible.add_row("hi", {{x, 1}}, RowSense::leq, 1.0);
  EXPECT_EQ(solver->solve_lp_with_duals(infeasible, {}).status, SolveStatus::infeasible);
  infeasible.variable(x).integer = true;
  EXPECT_EQ(solver->solve_milp(infeasible, {}).status, SolveStatus::infeasible);

  LinearModel unbounded;
  const VarId y = unbounded.add_variable("y", 0, kInfinity, false, -1.0);
  unbounded.add_row("r", {{y, 1}}, RowSense::geq, 0.0);
  const SolveOutcome u = solver->solve_lp_with_duals(unbounded, {});
  EXPECT_EQ(u.status, SolveStatus::unbounded);
  EXPECT_FALSE(u.has_solution());
}

TEST(Solver, ObjectiveOffsetIsIncluded) {
  auto solver = make_solver();
  LinearModel m = small_lp();
  m.set_objective_offset(12.5);
  EXPECT_NEAR(solver->solve_lp_with_duals(m, {}).objective, 7.5, 1e-9);
  EXPECT_NEAR(solver->solve_milp(m, {}).objective, 7.5, 1e-9);
}
