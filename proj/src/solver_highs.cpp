#include <chrono>
#include <cmath>
#include <memory>
#include <vector>

#include "Highs.h"
#include "amsp/errors.hpp"
#include "solver_backends.hpp"

namespace amsp::detail {
namespace {

HighsLp to_highs(const LinearModel& model, bool keep_integrality) {
  HighsLp lp;
  const int n = model.num_variables();
  const int m = model.num_rows();
  lp.num_col_ = n;
  lp.num_row_ = m;
  lp.sense_ = ObjSense::kMinimize;
  lp.offset_ = model.objective_offset();
  lp.col_cost_.resize(static_cast<std::size_t>(n));
  lp.col_lower_.resize(static_cast<std::size_t>(n));
  lp.col_upper_.resize(static_cast<std::size_t>(n));
  bool any_integer = false;
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.variable(j);
    lp.col_cost_[static_cast<std::size_t>(j)] = v.objective;
    lp.col_lower_[static_cast<std::size_t>(j)] = std::isinf(v.lower) ? -kHighsInf : v.lower;
    lp.col_upper_[static_cast<std::size_t>(j)] = std::isinf(v.upper) ? kHighsInf : v.upper;
    any_integer = any_integer || v.integer;
  }
  if (keep_integrality && any_integer) {
    lp.integrality_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      lp.integrality_[static_cast<std::size_t>(j)] =
          model.variable(j).integer ? HighsVarType::kInteger : HighsVarType::kContinuous;
    }
  }

  lp.row_lower_.resize(static_cast<std::size_t>(m));
  lp.row_upper_.resize(static_cast<std::size_t>(m));
  std::vector<HighsInt> count(static_cast<std::size_t>(n) + 1, 0);
  for (int r = 0; r < m; ++r) {
    const Row& row = model.row(r);
    const auto k = static_cast<std::size_t>(r);
    lp.row_lower_[k] = row.sense == RowSense::leq ? -kHighsInf : row.rhs;
    lp.row_upper_[k] = row.sense == RowSense::geq ? kHighsInf : row.rhs;
    for (const LinearTerm& t : row.terms) ++count[static_cast<std::size_t>(t.var) + 1];
  }
  HighsSparseMatrix& a = lp.a_matrix_;
  a.format_ = MatrixFormat::kColwise;
  a.num_col_ = n;
  a.num_row_ = m;
  a.start_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int j = 0; j < n; ++j) {
    a.start_[static_cast<std::size_t>(j) + 1] =
        a.start_[static_cast<std::size_t>(j)] + count[static_cast<std::size_t>(j) + 1];
  }
  a.index_.resize(static_cast<std::size_t>(a.start_.back()));
  a.value_.resize(static_cast<std::size_t>(a.start_.back()));
  std::vector<HighsInt> next(a.start_.begin(), a.start_.end() - 1);
  for (int r = 0; r < m; ++r) {
    for (const LinearTerm& t : model.row(r).terms) {
      const auto pos = static_cast<std::size_t>(next[static_cast<std::size_t>(t.var)]++);
      a.index_[pos] = r;
      a.value_[pos] = t.coef;
    }
  }
  return lp;
}

class HighsSolver final : public Solver {
 public:
  std::string_view name() const override { return "highs"; }

  SolveOutcome solve_milp(const LinearModel& model, const SolveOptions& options) override {
    return solve(model, options, /*integer=*/true);
  }

  SolveOutcome solve_lp_with_duals(const LinearModel& model,
                                   const SolveOptions& options) override {
    return solve(model, options, /*integer=*/false);
  }

 private:
  static SolveOutcome solve(const LinearModel& model, const SolveOptions& options,
                            bool integer) {
    const auto start = std::chrono::steady_clock::now();
    Highs highs;
    highs.setOptionValue("output_flag", options.verbose);
    highs.setOptionValue("time_limit", std::max(options.time_limit, 1e-3));
    highs.setOptionValue("mip_rel_gap", options.mip_gap);
    highs.setOptionValue("mip_abs_gap", 1e-9);

    HighsLp lp = to_highs(model, integer);
    const bool is_mip = !lp.integrality_.empty();
    if (highs.passModel(std::move(lp)) == HighsStatus::kError) {
      throw SolverError("HiGHS rejected the model");
    }
    if (is_mip && options.warm_start.size() == static_cast<std::size_t>(model.num_variables())) {
      HighsSolution hint;
      hint.col_value = options.warm_start;
      highs.setSolution(hint);
    }

    SolveOutcome out;
    if (highs.run() == HighsStatus::kError) {
      out.status = SolveStatus::error;
    } else {
      const HighsInfo& info = highs.getInfo();
      const bool has_primal = info.primal_solution_status == kSolutionStatusFeasible;
      switch (highs.getModelStatus()) {
        case HighsModelStatus::kOptimal:
          out.status = SolveStatus::optimal;
          break;
        case HighsModelStatus::kInfeasible:
          out.status = SolveStatus::infeasible;
          break;
        case HighsModelStatus::kUnbounded:
        case HighsModelStatus::kUnboundedOrInfeasible:
          out.status = SolveStatus::unbounded;
          break;
        case HighsModelStatus::kTimeLimit:
        case HighsModelStatus::kIterationLimit:
        case HighsModelStatus::kInterrupt:
        case HighsModelStatus::kSolutionLimit:
          out.status =
              has_primal ? SolveStatus::time_limit_feasible : SolveStatus::time_limit_no_solution;
          break;
        default:
          out.status = SolveStatus::error;
      }
      if (out.has_solution()) {
        const HighsSolution& sol = highs.getSolution();
        out.primal = sol.col_value;
        out.objective = info.objective_function_value;
        out.bound = is_mip ? info.mip_dual_bound : out.objective;
        out.mip_gap = is_mip ? info.mip_gap : 0.0;
        if (!is_mip && out.optimal() && sol.dual_valid) {
          out.duals = sol.row_dual;
          out.reduced_costs = sol.col_dual;
        }
      }
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }
};

}  // namespace

std::unique_ptr<Solver> make_highs_solver() { return std::make_unique<HighsSolver>(); }

}  // namespace amsp::detail
