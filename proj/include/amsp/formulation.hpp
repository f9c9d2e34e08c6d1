#pragma once

#include <optional>
#include <vector>

#include "amsp/instance.hpp"
#include "amsp/linear_model.hpp"
#include "amsp/nac.hpp"

namespace amsp {

/// A built model plus the variable/row maps needed to read solutions and duals.
struct Formulation {
  LinearModel model;
  int num_nodes = 0;
  int num_states = 0;
  int num_stage_vars = 0;
  int num_stages = 0;
  std::vector<VarId> x_vars;  // (n - 1) * I + i
  std::vector<VarId> y_vars;  // (n - 1) * J + j
  std::vector<VarId> r_vars;  // i * T + (t - 1); empty when the model has no revision block
  std::vector<NacConstraint> nacs;
  std::vector<RowId> nac_rows;  // parallel to nacs
  std::vector<RowId> linking_rows;

  VarId x(NodeId n, int i) const { return x_vars.at(static_cast<std::size_t>((n - 1) * num_states + i)); }
  VarId y(NodeId n, int j) const {
    return y_vars.at(static_cast<std::size_t>((n - 1) * num_stage_vars + j));
  }
  bool has_revisions() const { return !r_vars.empty(); }
  VarId r(int i, Stage t) const {
    return r_vars.at(static_cast<std::size_t>(i * num_stages + (t - 1)));
  }

  /// Reads r from a primal vector (rounded to the nearest integer).
  RevisionSchedule schedule(const std::vector<double>& primal) const;
};

/// (MSP): per-node blocks, linking rows, domains; no NACs.
Formulation build_msp(const AmspInstance& instance);

/// (2SP): MSP plus x_m = x_n within every stage, as chained equalities.
Formulation build_2sp(const AmspInstance& instance);

struct AmsOptions {
  NacRegime regime = NacRegime::reduced;
  /// Drop integrality of r (valid when every state component is binary).
  bool relax_revision_integrality = false;
  /// Force r[i][T] = mu instead of r[i][T] <= mu.
  bool force_full_revisions = false;
};

/// (AMS_mu) with full NACs or (AMS_mu+) with reduced NACs, plus the revision block.
Formulation build_ams(const AmspInstance& instance, const AmsOptions& options = {});

/// Subproblem at fixed revisions: reduced NACs with constant gaps. With `relaxed`, all
/// integrality is dropped (the convexified subproblem that supplies Benders duals).
Formulation fix_revisions(const AmspInstance& instance, const RevisionSchedule& schedule,
                          bool relaxed, NacRegime regime = NacRegime::reduced);

/// Objective comparison tolerance: max(1e-8, 1e-6 * max(1, |a|, |b|)).
double objective_tolerance(double a, double b);
inline bool objectives_agree(double a, double b) {
  return (a > b ? a - b : b - a) <= objective_tolerance(a, b);
}

struct Vams {
  double percent = 0.0;
  /// z(2SP) == z(MSP): flexibility is worthless and every schedule attains the bound.
  bool degenerate = false;
};

/// (z2sp - zams) / (z2sp - zmsp) * 100. Throws InconsistencyError when the ordering
/// z2sp >= zams >= zmsp is violated beyond objective_tolerance.
Vams vams(double z_2sp, double z_ams, double z_msp);

}  // namespace amsp
