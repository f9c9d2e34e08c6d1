#include "amsp/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "amsp/errors.hpp"

namespace amsp {

VarId LinearModel::add_variable(Variable v) {
  if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
    throw ParameterError("variable '" + v.name + "' has invalid bounds");
  }
  vars_.push_back(std::move(v));
  return static_cast<VarId>(vars_.size() - 1);
}

VarId LinearModel::add_variable(std::string name, double lower, double upper, bool integer,
                                double objective) {
  return add_variable(Variable{std::move(name), lower, upper, integer, objective});
}

RowId LinearModel::add_row(std::string name, std::vector<LinearTerm> terms, RowSense sense,
                           double rhs) {
  std::sort(terms.begin(), terms.end(),
            [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
  std::vector<LinearTerm> merged;
  merged.reserve(terms.size());
  for (const LinearTerm& t : terms) {
    if (t.var < 0 || t.var >= num_variables()) {
      throw ParameterError("row '" + name + "' references unknown variable " +
                           std::to_string(t.var));
    }
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const LinearTerm& t) { return t.coef == 0.0; });
  rows_.push_back(Row{std::move(name), std::move(merged), sense, rhs});
  return static_cast<RowId>(rows_.size() - 1);
}

int LinearModel::num_integer() const {
  return static_cast<int>(
      std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) { return v.integer; }));
}

void LinearModel::relax_integrality() {
  for (Variable& v : vars_) v.integer = false;
}

double LinearModel::evaluate_objective(const std::vector<double>& x) const {
  double z = offset_;
  for (std::size_t j = 0; j < vars_.size(); ++j) z += vars_[j].objective * x.at(j);
  return z;
}

double LinearModel::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max({worst, vars_[j].lower - x.at(j), x.at(j) - vars_[j].upper});
  }
  for (const Row& r : rows_) {
    double lhs = 0.0;
    for (const LinearTerm& t : r.terms) lhs += t.coef * x.at(static_cast<std::size_t>(t.var));
    switch (r.sense) {
      case RowSense::leq:
        worst = std::max(worst, lhs - r.rhs);
        break;
      case RowSense::geq:
        worst = std::max(worst, r.rhs - lhs);
        break;
      case RowSense::eq:
        worst = std::max(worst, std::abs(lhs - r.rhs));
        break;
    }
  }
  return worst;
}

namespace {

void write_expr(std::ostream& os, const LinearModel& m, const std::vector<LinearTerm>& terms) {
  if (terms.empty()) {
    os << " 0";
    return;
  }
  for (const LinearTerm& t : terms) {
    os << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << ' ' << m.variable(t.var).name;
  }
}

}  // namespace

void LinearModel::write_lp(std::ostream& os) const {
  os << "Minimize\n obj:";
  std::vector<LinearTerm> obj;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    if (vars_[j].objective != 0.0) obj.push_back({static_cast<VarId>(j), vars_[j].objective});
  }
  write_expr(os, *this, obj);
  if (offset_ != 0.0) os << (offset_ < 0 ? " - " : " + ") << std::abs(offset_);
  os << "\nSubject To\n";
  for (const Row& r : rows_) {
    os << ' ' << r.name << ':';
    write_expr(os, *this, r.terms);
    os << (r.sense == RowSense::leq ? " <= " : r.sense == RowSense::geq ? " >= " : " = ")
       << r.rhs << '\n';
  }
  os << "Bounds\n";
  for (const Variable& v : vars_) {
    os << ' ';
    if (std::isinf(v.lower)) {
      os << "-inf";
    } else {
      os << v.lower;
    }
    os << " <= " << v.name << " <= ";
    if (std::isinf(v.upper)) {
      os << "+inf";
    } else {
      os << v.upper;
    }
    os << '\n';
  }
  bool any_int = false;
  for (const Variable& v : vars_) {
    if (!v.integer) continue;
    if (!any_int) os << "General\n";
    any_int = true;
    os << ' ' << v.name << '\n';
  }
  os << "End\n";
}

}  // namespace amsp
