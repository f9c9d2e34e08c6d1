#include "amsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "amsp/errors.hpp"

namespace amsp {

std::vector<double> AmspInstance::big_m() const {
  std::vector<double> out;
  out.reserve(state_vars.size());
  for (const StateVarSpec& s : state_vars) out.push_back(s.big_m);
  return out;
}

namespace {

void check_spec(const VarSpec& v, const std::string& what) {
  if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
    throw ParameterError(what + " '" + v.name + "' has invalid bounds");
  }
}

}  // namespace

void AmspInstance::validate() const {
  const int T = tree.num_stages();
  if (mu < 0 || mu > T - 1) {
    throw ParameterError("revision budget mu=" + std::to_string(mu) + " outside [0, " +
                         std::to_string(T - 1) + "]");
  }
  for (const StateVarSpec& s : state_vars) {
    check_spec(s, "state variable");
    if (!(s.big_m > 0.0) || std::isinf(s.big_m)) {
      throw ParameterError("state variable '" + s.name + "' needs a finite positive big-M");
    }
    // The NAC big-M deactivation argument needs x in [0, x̄].
    if (s.lower < 0.0 || s.upper > s.big_m) {
      throw ParameterError("state variable '" + s.name + "' domain must lie within [0, big_m]");
    }
  }
  for (const VarSpec& v : stage_vars) check_spec(v, "stage variable");
  if (static_cast<int>(nodes.size()) != tree.num_nodes()) {
    throw ParameterError("instance has " + std::to_string(nodes.size()) + " node records for " +
                         std::to_string(tree.num_nodes()) + " tree nodes");
  }

  const int I = num_states();
  const int J = num_stage_vars();
  for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
    const NodeData& d = node(n);
    if (static_cast<int>(d.state_cost.size()) != I || static_cast<int>(d.stage_cost.size()) != J) {
      throw ParameterError("node " + std::to_string(n) + " cost vectors do not match I=" +
                           std::to_string(I) + ", J=" + std::to_string(J));
    }
    const std::vector<NodeId> path = tree.path_to_root(n);
    for (const NodeRow& row : d.rows) {
      for (const NodeTerm& term : row.terms) {
        if (std::find(path.begin(), path.end(), term.node) == path.end()) {
          throw ParameterError("row '" + row.name + "' of node " + std::to_string(n) +
                               " references node " + std::to_string(term.node) +
                               " outside its root path");
        }
        const int dim = term.block == VarBlock::state ? I : J;
        if (term.index < 0 || term.index >= dim) {
          throw ParameterError("row '" + row.name + "' of node " + std::to_string(n) +
                               " references component " + std::to_string(term.index) +
                               " out of range");
        }
      }
    }
  }
  for (const BoundOverride& b : bounds) {
    if (!tree.contains(b.node)) throw ParameterError("bound override on invalid node");
    const int dim = b.block == VarBlock::state ? I : J;
    if (b.index < 0 || b.index >= dim) throw ParameterError("bound override index out of range");
    if (b.lower > b.upper) throw ParameterError("bound override has lower > upper");
    if (b.block == VarBlock::state) {
      const double bm = state_vars[static_cast<std::size_t>(b.index)].big_m;
      if (b.lower < 0.0 || b.upper > bm) {
        throw ParameterError("state bound override must lie within [0, big_m]");
      }
    }
  }
}

AmspInstance AmspInstance::truncated(int num_stages) const {
  AmspInstance out;
  out.name = name;
  out.tree = tree.truncated(num_stages);
  out.state_vars = state_vars;
  out.stage_vars = stage_vars;
  out.nodes.assign(nodes.begin(), nodes.begin() + out.tree.num_nodes());
  for (const BoundOverride& b : bounds) {
    if (b.node <= out.tree.num_nodes()) out.bounds.push_back(b);
  }
  out.mu = std::min(mu, num_stages - 1);
  return out;
}

RevisionSchedule::RevisionSchedule(int num_states, int num_stages)
    : num_stages_(num_stages),
      r_(static_cast<std::size_t>(num_states),
         std::vector<int>(static_cast<std::size_t>(num_stages) + 1, 0)) {
  if (num_states < 0 || num_stages < 1) throw ParameterError("invalid revision schedule shape");
}

RevisionSchedule RevisionSchedule::from_revision_stages(
    int num_stages, const std::vector<std::vector<Stage>>& stages) {
  RevisionSchedule s(static_cast<int>(stages.size()), num_stages);
  for (std::size_t i = 0; i < stages.size(); ++i) {
    Stage prev = 1;
    for (Stage t : stages[i]) {
      if (t <= prev || t > num_stages) {
        throw ParameterError("revision stages must be strictly increasing within 2..T");
      }
      prev = t;
    }
    int count = 0;
    auto next = stages[i].begin();
    for (Stage t = 1; t <= num_stages; ++t) {
      if (next != stages[i].end() && *next == t) {
        ++count;
        ++next;
      }
      s.r_[i][static_cast<std::size_t>(t)] = count;
    }
  }
  return s;
}

int RevisionSchedule::at(int state, Stage t) const {
  return r_.at(static_cast<std::size_t>(state)).at(static_cast<std::size_t>(t));
}

void RevisionSchedule::set(int state, Stage t, int value) {
  if (t < 1 || t > num_stages_) throw ParameterError("revision stage out of range");
  r_.at(static_cast<std::size_t>(state)).at(static_cast<std::size_t>(t)) = value;
}

std::vector<Stage> RevisionSchedule::revision_stages(int state) const {
  std::vector<Stage> out;
  for (Stage t = 2; t <= num_stages_; ++t) {
    if (at(state, t) - at(state, t - 1) == 1) out.push_back(t);
  }
  return out;
}

bool RevisionSchedule::is_valid(int mu) const {
  for (const std::vector<int>& row : r_) {
    if (row[1] != 0) return false;
    for (Stage t = 2; t <= num_stages_; ++t) {
      const int step = row[static_cast<std::size_t>(t)] - row[static_cast<std::size_t>(t) - 1];
      if (step != 0 && step != 1) return false;
    }
    if (row[static_cast<std::size_t>(num_stages_)] > mu) return false;
  }
  return true;
}

void RevisionSchedule::validate(int mu) const {
  if (!is_valid(mu)) {
    throw ParameterError("invalid revision schedule " + to_string() + " for mu=" +
                         std::to_string(mu));
  }
}

std::string RevisionSchedule::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < num_states(); ++i) {
    if (i > 0) os << ';';
    const std::vector<Stage> ys = revision_stages(i);
    os << '(';
    for (std::size_t k = 0; k < ys.size(); ++k) os << (k ? " " : "") << ys[k];
    os << ')';
  }
  return os.str();
}

RevisionSchedule pad_revisions(const RevisionSchedule& r, int mu) {
  r.validate(mu);
  const int T = r.num_stages();
  std::vector<std::vector<Stage>> stages;
  for (int i = 0; i < r.num_states(); ++i) {
    std::vector<Stage> ys = r.revision_stages(i);
    for (Stage t = T; t >= 2 && std::ssize(ys) < std::min(mu, T - 1); --t) {
      if (std::find(ys.begin(), ys.end(), t) == ys.end()) ys.push_back(t);
    }
    std::sort(ys.begin(), ys.end());
    stages.push_back(std::move(ys));
  }
  return RevisionSchedule::from_revision_stages(T, stages);
}

std::vector<RevisionSchedule> enumerate_schedules(int num_states, int num_stages, int mu,
                                                  bool exactly_mu, std::size_t limit) {
  if (mu < 0 || mu > num_stages - 1) throw ParameterError("mu outside [0, T-1]");

  // Revision-stage subsets for a single state component.
  std::vector<std::vector<Stage>> subsets;
  std::vector<Stage> current;
  std::function<void(Stage)> grow = [&](Stage next) {
    const int k = static_cast<int>(current.size());
    if (!exactly_mu || k == mu) subsets.push_back(current);
    if (k == mu) return;
    for (Stage t = next; t <= num_stages; ++t) {
      current.push_back(t);
      grow(t + 1);
      current.pop_back();
      if (subsets.size() > limit) return;
    }
  };
  grow(2);

  std::size_t total = 1;
  for (int i = 0; i < num_states; ++i) {
    if (__builtin_mul_overflow(total, subsets.size(), &total) || total > limit) {
      throw GuardExceeded("schedule enumeration exceeds the limit of " + std::to_string(limit));
    }
  }

  std::vector<RevisionSchedule> out;
  out.reserve(total);
  std::vector<std::size_t> pick(static_cast<std::size_t>(num_states), 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<std::vector<Stage>> per_state;
    per_state.reserve(pick.size());
    for (std::size_t p : pick) per_state.push_back(subsets[p]);
    out.push_back(RevisionSchedule::from_revision_stages(num_stages, per_state));
    for (std::size_t i = pick.size(); i-- > 0;) {
      if (++pick[i] < subsets.size()) break;
      pick[i] = 0;
    }
  }
  return out;
}

}  // namespace amsp
