#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "amsp/linear_model.hpp"

namespace amsp {

enum class SolveStatus {
  optimal,
  infeasible,
  unbounded,
  time_limit_feasible,
  time_limit_no_solution,
  error,
};

std::string_view to_string(SolveStatus status);

struct SolveOptions {
  double time_limit = 300.0;  // seconds
  double mip_gap = 1e-6;      // relative
  bool verbose = false;
  /// Optional MIP start (one value per variable); advisory only.
  std::vector<double> warm_start;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::error;
  double objective = 0.0;
  /// Best proven bound for MILPs; equals objective for LPs.
  double bound = 0.0;
  std::vector<double> primal;
  /// Row duals as d(objective)/d(rhs); filled only for optimal pure-LP solves.
  std::vector<double> duals;
  /// Reduced costs c - A'y, filled alongside duals.
  std::vector<double> reduced_costs;
  double wall_seconds = 0.0;
  double mip_gap = 0.0;

  bool optimal() const { return status == SolveStatus::optimal; }
  bool has_solution() const {
    return status == SolveStatus::optimal || status == SolveStatus::time_limit_feasible;
  }
  bool has_duals() const { return !duals.empty(); }
};

/// Engine-independent MILP/LP interface. One in-flight solve per instance.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual std::string_view name() const = 0;
  virtual SolveOutcome solve_milp(const LinearModel& model, const SolveOptions& options) = 0;
  /// Solves the LP relaxation (integrality ignored) and returns duals when optimal.
  virtual SolveOutcome solve_lp_with_duals(const LinearModel& model,
                                           const SolveOptions& options) = 0;
};

/// Names of compiled-in engines, default first.
std::vector<std::string> available_solvers();
/// "default" picks the first available engine. Throws SolverError if unknown.
std::unique_ptr<Solver> make_solver(std::string_view name = "default");

/// Lagrangian dual objective rhs'y + sum_j d_j * (active bound of j) + offset, for checking
/// strong duality of an LP outcome.
double dual_objective(const LinearModel& model, const SolveOutcome& outcome);

}  // namespace amsp
