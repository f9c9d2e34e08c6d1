#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace amsp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using VarId = int;
using RowId = int;

enum class RowSense { leq, eq, geq };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool integer = false;
  double objective = 0.0;
};

struct LinearTerm {
  VarId var;
  double coef;
};

struct Row {
  std::string name;
  std::vector<LinearTerm> terms;
  RowSense sense = RowSense::geq;
  double rhs = 0.0;
};

/// A minimization MILP/LP in sparse row form.
class LinearModel {
 public:
  VarId add_variable(Variable v);
  VarId add_variable(std::string name, double lower, double upper, bool integer,
                     double objective = 0.0);
  /// Terms must reference registered variables; duplicates are merged.
  RowId add_row(std::string name, std::vector<LinearTerm> terms, RowSense sense, double rhs);

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_integer() const;
  bool has_integers() const { return num_integer() > 0; }

  const Variable& variable(VarId v) const { return vars_.at(static_cast<std::size_t>(v)); }
  Variable& variable(VarId v) { return vars_.at(static_cast<std::size_t>(v)); }
  const Row& row(RowId r) const { return rows_.at(static_cast<std::size_t>(r)); }
  Row& row(RowId r) { return rows_.at(static_cast<std::size_t>(r)); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }

  double objective_offset() const { return offset_; }
  void set_objective_offset(double offset) { offset_ = offset; }

  /// Drops every integrality flag (LP relaxation).
  void relax_integrality();

  /// Evaluates the objective at a primal point.
  double evaluate_objective(const std::vector<double>& x) const;
  /// Largest bound or row violation at a primal point (0 when feasible).
  double max_violation(const std::vector<double>& x) const;

  /// CPLEX-LP style text dump for debugging.
  void write_lp(std::ostream& os) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  double offset_ = 0.0;
};

}  // namespace amsp
