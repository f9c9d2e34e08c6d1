#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "amsp/formulation.hpp"
#include "amsp/instance.hpp"
#include "amsp/solver.hpp"

namespace amsp {

enum class CutKind { lshaped, benders, heuristic };

std::string_view to_string(CutKind kind);

/// A linear inequality over the master variables (r, theta):
///
///   theta_coef * theta >= constant + sum_k coefs[k] * r[state_k, stage_k]
///
/// Optimality cuts have theta_coef = 1; heuristic cuts have theta_coef = 0 and read
/// 0 >= r_lower - r[i, t].
struct Cut {
  struct Term {
    int state;
    Stage stage;
    double coef;
  };

  CutKind kind = CutKind::lshaped;
  double theta_coef = 1.0;
  double constant = 0.0;
  std::vector<Term> terms;
  RevisionSchedule generator;
  /// Q(r̄) for L-shaped cuts, the relaxed subproblem value for Benders cuts.
  double generator_value = 0.0;

  /// constant + sum coef * r.
  double rhs(const RevisionSchedule& r) const;
  bool satisfied(const RevisionSchedule& r, double theta, double tol = 1e-7) const;
};

/// Integer L-shaped cut: tight (theta >= Q) at r̄, at most L at any other step schedule.
/// Q slightly below L (within objective_tolerance) is clamped to L; beyond that the bound
/// is inconsistent and InconsistencyError is thrown.
Cut lshaped_cut(const RevisionSchedule& rbar, double q_value, double lower_bound);

/// Benders cut in sensitivity form from an optimal LP solve of the relaxed subproblem
/// `rsp` built at `rbar`: theta >= Q̲(r̄) + sum_c dual_c * d(rhs_c)/d(gap_c) * (gap_c(r) - gap_c(r̄)).
Cut benders_cut(const Formulation& rsp, const SolveOutcome& lp, const RevisionSchedule& rbar);

struct HeuristicCuts {
  std::vector<Cut> cuts;
  /// Optimal revisions of the truncated problem, extended constantly to T stages.
  std::optional<RevisionSchedule> start;
  std::string warning;
};

/// Solves (AMS_mu+) on the tree truncated to T - horizon_cut stages and returns the
/// cuts r[i][t] >= r̲[i][t] for t <= T - horizon_cut. Solver failure yields no cuts and
/// a warning.
HeuristicCuts heuristic_cuts(const AmspInstance& instance, int horizon_cut, Solver& solver,
                             const SolveOptions& options);

struct DecompositionConfig {
  double epsilon = 1e-3;
  int horizon_cut = 2;
  bool heuristic = true;
  bool rub_gate = true;
  double time_limit = 300.0;
  double mip_gap = 1e-6;
  int max_iterations = 100000;
  /// Restrict the master to schedules with exactly min(mu, T-1) revisions per state. Forcing
  /// r[i][T] = mu leaves the optimum unchanged and makes every evaluated Q(r) exact.
  bool full_revisions = true;

  /// Heuristic cuts and RUB gating off: finite convergence to an optimal schedule.
  static DecompositionConfig exact() {
    DecompositionConfig c;
    c.heuristic = false;
    c.rub_gate = false;
    return c;
  }
};

struct IterationRecord {
  int iteration = 0;
  double lb = 0.0;
  double ub = 0.0;
  double rub = 0.0;
  double gap = 0.0;
  int lshaped_cuts = 0;
  int benders_cuts = 0;
  int heuristic_cuts = 0;
  double wall_seconds = 0.0;
  std::string schedule;
};

enum class DecompositionStatus { converged, time_limit, iteration_limit, solver_failure };
std::string_view to_string(DecompositionStatus status);

struct DecompositionState {
  DecompositionStatus status = DecompositionStatus::solver_failure;
  double lb = -kInfinity;
  double ub = kInfinity;
  double rub = kInfinity;
  /// L = z(MSP).
  double lower_bound = -kInfinity;
  double epsilon = 1e-3;
  std::optional<RevisionSchedule> incumbent;
  std::vector<Cut> lshaped;
  std::vector<Cut> benders;
  std::vector<Cut> heuristic;
  std::vector<IterationRecord> log;
  std::string warning;
  double wall_seconds = 0.0;

  /// (UB - LB) / |UB|, i.e. 1 - LB/UB for positive UB.
  double gap() const;
  void write_log_csv(std::ostream& os) const;
};

struct MasterResult {
  RevisionSchedule schedule;
  double lb = 0.0;
  SolveStatus status = SolveStatus::error;
};

/// Master problem: min theta over the revision structure, theta >= L, and all cuts. With
/// `full_revisions`, r[i][T] is fixed at min(mu, T-1).
MasterResult solve_master(int num_states, int num_stages, int mu, double lower_bound,
                          const std::vector<const std::vector<Cut>*>& pools, Solver& solver,
                          const SolveOptions& options,
                          const RevisionSchedule* warm_start = nullptr,
                          bool full_revisions = false);

/// Cutting-plane loop over revision schedules.
DecompositionState run_decomposition(const AmspInstance& instance,
                                     const DecompositionConfig& config, Solver& solver);

}  // namespace amsp
