#include "amsp/solver.hpp"

#include <cmath>

#include "amsp/errors.hpp"
#include "solver_backends.hpp"

namespace amsp {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::unbounded:
      return "unbounded";
    case SolveStatus::time_limit_feasible:
      return "time-limit-feasible";
    case SolveStatus::time_limit_no_solution:
      return "time-limit-no-solution";
    case SolveStatus::error:
      return "error";
  }
  return "?";
}

std::vector<std::string> available_solvers() {
  std::vector<std::string> out;
#ifdef AMSP_WITH_HIGHS
  out.emplace_back("highs");
#endif
  return out;
}

std::unique_ptr<Solver> make_solver(std::string_view name) {
  const std::vector<std::string> names = available_solvers();
  if (names.empty()) throw SolverError("no MILP backend compiled in");
  if (name == "default") name = names.front();
#ifdef AMSP_WITH_HIGHS
  if (name == "highs") return detail::make_highs_solver();
#endif
  throw SolverError("solver backend '" + std::string(name) + "' is not available");
}

double dual_objective(const LinearModel& model, const SolveOutcome& outcome) {
  if (!outcome.has_duals()) throw SolverError("outcome carries no dual values");
  double z = model.objective_offset();
  for (int r = 0; r < model.num_rows(); ++r) {
    z += outcome.duals[static_cast<std::size_t>(r)] * model.row(r).rhs;
  }
  constexpr double kZero = 1e-9;
  for (int j = 0; j < model.num_variables(); ++j) {
    const double d = outcome.reduced_costs[static_cast<std::size_t>(j)];
    if (std::abs(d) <= kZero) continue;
    const Variable& v = model.variable(j);
    const double bound = d > 0 ? v.lower : v.upper;
    if (std::isinf(bound)) return d > 0 ? -kInfinity : kInfinity;
    z += d * bound;
  }
  return z;
}

}  // namespace amsp
