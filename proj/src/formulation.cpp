#include "amsp/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "amsp/errors.hpp"

namespace amsp {
namespace {

std::string var_name(char block, NodeId n, int idx) {
  return std::string(1, block) + std::to_string(idx + 1) + "_" + std::to_string(n);
}

/// Variables, objective and linking rows shared by every formulation.
Formulation build_base(const AmspInstance& inst) {
  inst.validate();
  Formulation f;
  f.num_nodes = inst.tree.num_nodes();
  f.num_states = inst.num_states();
  f.num_stage_vars = inst.num_stage_vars();
  f.num_stages = inst.num_stages();

  const int I = f.num_states;
  const int J = f.num_stage_vars;
  f.x_vars.reserve(static_cast<std::size_t>(f.num_nodes * I));
  f.y_vars.reserve(static_cast<std::size_t>(f.num_nodes * J));
  for (NodeId n = 1; n <= f.num_nodes; ++n) {
    const double p = inst.tree.probability(n);
    const NodeData& d = inst.node(n);
    for (int i = 0; i < I; ++i) {
      const StateVarSpec& s = inst.state_vars[static_cast<std::size_t>(i)];
      f.x_vars.push_back(f.model.add_variable(var_name('x', n, i), s.lower, s.upper, s.integer,
                                              p * d.state_cost[static_cast<std::size_t>(i)]));
    }
    for (int j = 0; j < J; ++j) {
      const VarSpec& s = inst.stage_vars[static_cast<std::size_t>(j)];
      f.y_vars.push_back(f.model.add_variable(var_name('y', n, j), s.lower, s.upper, s.integer,
                                              p * d.stage_cost[static_cast<std::size_t>(j)]));
    }
  }
  for (const BoundOverride& b : inst.bounds) {
    Variable& v = f.model.variable(b.block == VarBlock::state ? f.x(b.node, b.index)
                                                             : f.y(b.node, b.index));
    v.lower = std::max(v.lower, b.lower);
    v.upper = std::min(v.upper, b.upper);
    if (v.lower > v.upper) throw ParameterError("bound override empties the domain of " + v.name);
  }
  for (NodeId n = 1; n <= f.num_nodes; ++n) {
    int k = 0;
    for (const NodeRow& row : inst.node(n).rows) {
      std::vector<LinearTerm> terms;
      terms.reserve(row.terms.size());
      for (const NodeTerm& t : row.terms) {
        terms.push_back({t.block == VarBlock::state ? f.x(t.node, t.index) : f.y(t.node, t.index),
                         t.coef});
      }
      std::string name = row.name.empty() ? "link" + std::to_string(k) : row.name;
      f.linking_rows.push_back(
          f.model.add_row(name + "_" + std::to_string(n), std::move(terms), row.sense, row.rhs));
      ++k;
    }
  }
  return f;
}

/// Revision counters with r_i1 = 0, 0/1 steps and r_iT <= mu (or == mu).
void add_revision_block(Formulation& f, int mu, bool integer, bool force_full) {
  const int T = f.num_stages;
  f.r_vars.reserve(static_cast<std::size_t>(f.num_states * T));
  for (int i = 0; i < f.num_states; ++i) {
    for (Stage t = 1; t <= T; ++t) {
      const double ub = t == 1 ? 0.0 : std::min(t - 1, mu);
      const double lb = (force_full && t == T) ? ub : 0.0;
      f.r_vars.push_back(f.model.add_variable(
          "r" + std::to_string(i + 1) + "_" + std::to_string(t), lb, ub, integer));
    }
    for (Stage t = 1; t < T; ++t) {
      const std::string tag = std::to_string(i + 1) + "_" + std::to_string(t);
      f.model.add_row("rmono" + tag, {{f.r(i, t + 1), 1.0}, {f.r(i, t), -1.0}}, RowSense::geq,
                      0.0);
      f.model.add_row("rstep" + tag, {{f.r(i, t + 1), 1.0}, {f.r(i, t), -1.0}}, RowSense::leq,
                      1.0);
    }
  }
}

std::string nac_name(const NacConstraint& c, std::size_t k) {
  return "nac" + std::to_string(k) + "_" + std::to_string(c.state + 1) + "_" +
         std::to_string(c.left) + "_" + std::to_string(c.right);
}

}  // namespace

RevisionSchedule Formulation::schedule(const std::vector<double>& primal) const {
  if (!has_revisions()) throw ParameterError("formulation has no revision variables");
  RevisionSchedule s(num_states, num_stages);
  for (int i = 0; i < num_states; ++i) {
    for (Stage t = 1; t <= num_stages; ++t) {
      s.set(i, t, static_cast<int>(std::lround(primal.at(static_cast<std::size_t>(r(i, t))))));
    }
  }
  return s;
}

Formulation build_msp(const AmspInstance& instance) { return build_base(instance); }

Formulation build_2sp(const AmspInstance& instance) {
  Formulation f = build_base(instance);
  for (Stage t = 1; t <= f.num_stages; ++t) {
    const NodeRange nodes = instance.tree.stage_nodes(t);
    for (int k = 0; k + 1 < nodes.size; ++k) {
      for (int i = 0; i < f.num_states; ++i) {
        f.model.add_row("eq" + std::to_string(i + 1) + "_" + std::to_string(nodes[k]),
                        {{f.x(nodes[k], i), 1.0}, {f.x(nodes[k + 1], i), -1.0}}, RowSense::eq,
                        0.0);
      }
    }
  }
  return f;
}

Formulation build_ams(const AmspInstance& instance, const AmsOptions& options) {
  Formulation f = build_base(instance);
  add_revision_block(f, instance.mu, !options.relax_revision_integrality,
                     options.force_full_revisions);
  NacSet set = generate_nacs(instance.tree, options.regime, instance.mu, instance.big_m());
  f.nac_rows.reserve(set.size());
  for (std::size_t k = 0; k < set.constraints.size(); ++k) {
    const NacConstraint& c = set.constraints[k];
    // x_m - x_n + M r_t' - M r_ta >= 0  (geq)   or   x_m - x_n - M r_t' + M r_ta <= 0  (leq)
    const double sign = c.direction == NacDirection::geq ? 1.0 : -1.0;
    f.nac_rows.push_back(f.model.add_row(
        nac_name(c, k),
        {{f.x(c.left, c.state), 1.0},
         {f.x(c.right, c.state), -1.0},
         {f.r(c.state, c.stage), sign * c.big_m},
         {f.r(c.state, c.ancestor_stage), -sign * c.big_m}},
        c.direction == NacDirection::geq ? RowSense::geq : RowSense::leq, 0.0));
  }
  f.nacs = std::move(set.constraints);
  return f;
}

Formulation fix_revisions(const AmspInstance& instance, const RevisionSchedule& schedule,
                          bool relaxed, NacRegime regime) {
  schedule.validate(instance.mu);
  if (schedule.num_states() != instance.num_states() ||
      schedule.num_stages() != instance.num_stages()) {
    throw ParameterError("revision schedule shape does not match the instance");
  }
  Formulation f = build_base(instance);
  if (relaxed) f.model.relax_integrality();
  NacSet set = generate_nacs(instance.tree, regime, instance.mu, instance.big_m());
  f.nac_rows.reserve(set.size());
  for (std::size_t k = 0; k < set.constraints.size(); ++k) {
    const NacConstraint& c = set.constraints[k];
    const double gap = c.big_m * (schedule.at(c.state, c.stage) -
                                  schedule.at(c.state, c.ancestor_stage));
    // x_m - x_n >= -M gap   or   x_m - x_n <= M gap
    const bool geq = c.direction == NacDirection::geq;
    f.nac_rows.push_back(f.model.add_row(nac_name(c, k),
                                         {{f.x(c.left, c.state), 1.0},
                                          {f.x(c.right, c.state), -1.0}},
                                         geq ? RowSense::geq : RowSense::leq,
                                         geq ? -gap : gap));
  }
  f.nacs = std::move(set.constraints);
  return f;
}

double objective_tolerance(double a, double b) {
  return std::max(1e-8, 1e-6 * std::max({1.0, std::abs(a), std::abs(b)}));
}

Vams vams(double z_2sp, double z_ams, double z_msp) {
  const double tol_hi = objective_tolerance(z_2sp, z_ams);
  const double tol_lo = objective_tolerance(z_ams, z_msp);
  if (z_ams > z_2sp + tol_hi || z_msp > z_ams + tol_lo) {
    throw InconsistencyError("objective ordering z(2SP) >= z(AMS) >= z(MSP) violated: " +
                             std::to_string(z_2sp) + ", " + std::to_string(z_ams) + ", " +
                             std::to_string(z_msp));
  }
  if (z_2sp - z_msp <= objective_tolerance(z_2sp, z_msp)) return {100.0, true};
  const double v = (z_2sp - z_ams) / (z_2sp - z_msp) * 100.0;
  return {std::clamp(v, 0.0, 100.0), false};
}

}  // namespace amsp
