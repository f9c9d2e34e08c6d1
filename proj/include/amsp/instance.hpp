#pragma once

#include <string>
#include <vector>

#include "amsp/linear_model.hpp"
#include "amsp/scenario_tree.hpp"

namespace amsp {

/// Domain of one variable component: box plus integrality.
struct VarSpec {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool integer = false;
};

/// A state component additionally carries its NAC big-M (upper bound x̄_i).
struct StateVarSpec : VarSpec {
  double big_m = 1.0;
};

enum class VarBlock { state, stage };

/// Coefficient on variable component `index` of block `block` at node `node`.
struct NodeTerm {
  NodeId node = 1;
  VarBlock block = VarBlock::state;
  int index = 0;
  double coef = 0.0;
};

/// A linking row owned by some node n. Terms may reference variables of any node on P(n).
struct NodeRow {
  std::string name;
  std::vector<NodeTerm> terms;
  RowSense sense = RowSense::geq;
  double rhs = 0.0;
};

struct NodeData {
  std::vector<double> state_cost;  // a_n, length I
  std::vector<double> stage_cost;  // b_n, length J
  std::vector<NodeRow> rows;
};

/// Per-node bound tightening of one variable component.
struct BoundOverride {
  NodeId node = 1;
  VarBlock block = VarBlock::state;
  int index = 0;
  double lower = 0.0;
  double upper = kInfinity;
};

/// Generic adaptive multistage instance: per-node data over a scenario tree.
///
/// The objective is sum_n p_n (a_n' x_n + b_n' y_n); node probabilities come from the tree.
struct AmspInstance {
  std::string name;
  ScenarioTree tree = ScenarioTree::uniform(1, 1);
  std::vector<StateVarSpec> state_vars;
  std::vector<VarSpec> stage_vars;
  std::vector<NodeData> nodes;  // nodes[n - 1] belongs to node n
  std::vector<BoundOverride> bounds;
  int mu = 0;

  int num_states() const { return static_cast<int>(state_vars.size()); }
  int num_stage_vars() const { return static_cast<int>(stage_vars.size()); }
  int num_stages() const { return tree.num_stages(); }
  const NodeData& node(NodeId n) const { return nodes.at(static_cast<std::size_t>(n - 1)); }
  NodeData& node(NodeId n) { return nodes.at(static_cast<std::size_t>(n - 1)); }

  std::vector<double> big_m() const;

  /// Throws ParameterError describing the first violated invariant.
  void validate() const;

  /// Same data restricted to stages 1..num_stages; mu is clipped to num_stages - 1.
  AmspInstance truncated(int num_stages) const;
};

/// Revision counters r[i][t] for i in 0..I-1 and t in 1..T (index 0 of each row unused).
class RevisionSchedule {
 public:
  RevisionSchedule() = default;
  RevisionSchedule(int num_states, int num_stages);

  /// Builds counters from per-state revision stages (each in 2..T, strictly increasing).
  static RevisionSchedule from_revision_stages(int num_stages,
                                               const std::vector<std::vector<Stage>>& stages);

  int num_states() const { return static_cast<int>(r_.size()); }
  int num_stages() const { return num_stages_; }
  int at(int state, Stage t) const;
  void set(int state, Stage t, int value);

  /// Y_i(r): stages t with r[i][t] - r[i][t-1] = 1.
  std::vector<Stage> revision_stages(int state) const;
  int revisions(int state) const { return at(state, num_stages_); }

  /// True when r[i][1] = 0, steps are 0/1 and r[i][T] <= mu for all i.
  bool is_valid(int mu) const;
  void validate(int mu) const;

  std::string to_string() const;
  bool operator==(const RevisionSchedule&) const = default;
  auto operator<=>(const RevisionSchedule&) const = default;

 private:
  int num_stages_ = 0;
  std::vector<std::vector<int>> r_;
};

/// Adds the latest unused revision stages until every state has min(mu, T-1) revisions.
/// A solution that satisfies the reduced NACs at `r` satisfies the full NACs at the result.
RevisionSchedule pad_revisions(const RevisionSchedule& r, int mu);

/// Every valid schedule, optionally only those using exactly mu revisions per state.
/// Throws GuardExceeded when more than `limit` schedules would be produced.
std::vector<RevisionSchedule> enumerate_schedules(int num_states, int num_stages, int mu,
                                                  bool exactly_mu, std::size_t limit = 10000);

}  // namespace amsp
