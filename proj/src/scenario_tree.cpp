#include "amsp/scenario_tree.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "amsp/errors.hpp"

namespace amsp {

std::vector<NodeId> NodeRange::to_vector() const {
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(size));
  for (NodeId n : *this) out.push_back(n);
  return out;
}

ScenarioTree::ScenarioTree(int num_stages, int branching)
    : num_stages_(num_stages), branching_(branching) {
  if (num_stages < 1) throw ParameterError("scenario tree needs at least one stage");
  if (branching < 1) throw ParameterError("scenario tree branching must be positive");

  stage_first_.assign(static_cast<std::size_t>(num_stages) + 2, 0);
  long long width = 1;
  long long first = 1;
  for (int t = 1; t <= num_stages; ++t) {
    stage_first_[t] = static_cast<NodeId>(first);
    first += width;
    if (first > std::numeric_limits<NodeId>::max() / 2) {
      throw ParameterError("scenario tree with T=" + std::to_string(num_stages) +
                           " B=" + std::to_string(branching) + " is too large");
    }
    if (t < num_stages) width *= branching;
  }
  stage_first_[num_stages + 1] = static_cast<NodeId>(first);

  stage_of_.assign(static_cast<std::size_t>(first), 0);
  for (int t = 1; t <= num_stages; ++t) {
    for (NodeId n = stage_first_[t]; n < stage_first_[t + 1]; ++n) stage_of_[n] = t;
  }
}

ScenarioTree ScenarioTree::uniform(int num_stages, int branching) {
  ScenarioTree tree(num_stages, branching);
  tree.probability_.assign(tree.stage_of_.size(), 0.0);
  double p = 1.0;
  for (int t = 1; t <= num_stages; ++t) {
    for (NodeId n : tree.stage_nodes(t)) tree.probability_[n] = p;
    p /= branching;
  }
  return tree;
}

ScenarioTree ScenarioTree::with_probabilities(int num_stages, int branching,
                                              std::vector<double> probabilities) {
  ScenarioTree tree(num_stages, branching);
  if (static_cast<int>(probabilities.size()) != tree.num_nodes()) {
    throw ParameterError("expected " + std::to_string(tree.num_nodes()) +
                         " node probabilities, got " + std::to_string(probabilities.size()));
  }
  tree.probability_.assign(1, 0.0);
  tree.probability_.insert(tree.probability_.end(), probabilities.begin(), probabilities.end());

  constexpr double kTol = 1e-9;
  for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
    const double p = tree.probability_[n];
    if (!(p > 0.0) || p > 1.0 + kTol) {
      throw ParameterError("node " + std::to_string(n) + " probability must lie in (0,1]");
    }
  }
  for (int t = 1; t <= num_stages; ++t) {
    double sum = 0.0;
    for (NodeId n : tree.stage_nodes(t)) sum += tree.probability_[n];
    if (std::abs(sum - 1.0) > kTol) {
      throw ParameterError("probabilities of stage " + std::to_string(t) + " sum to " +
                           std::to_string(sum));
    }
  }
  for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
    if (tree.stage(n) == num_stages) continue;
    double sum = 0.0;
    for (NodeId c : tree.children(n)) sum += tree.probability_[c];
    if (std::abs(sum - tree.probability_[n]) > kTol) {
      throw ParameterError("children of node " + std::to_string(n) +
                           " do not sum to its probability");
    }
  }
  return tree;
}

void ScenarioTree::check_node(NodeId n) const {
  if (!contains(n)) throw ParameterError("invalid node index " + std::to_string(n));
}

Stage ScenarioTree::stage(NodeId n) const {
  check_node(n);
  return stage_of_[n];
}

double ScenarioTree::probability(NodeId n) const {
  check_node(n);
  return probability_[n];
}

NodeId ScenarioTree::parent(NodeId n) const {
  check_node(n);
  if (n == 1) return 0;
  return (n - 2) / branching_ + 1;
}

NodeRange ScenarioTree::children(NodeId n) const {
  check_node(n);
  if (stage_of_[n] == num_stages_) return {n, 0};
  return {branching_ * (n - 1) + 2, branching_};
}

NodeRange ScenarioTree::stage_nodes(Stage t) const {
  if (t < 1 || t > num_stages_) throw ParameterError("invalid stage " + std::to_string(t));
  return {stage_first_[t], stage_first_[t + 1] - stage_first_[t]};
}

std::vector<NodeId> ScenarioTree::path_to_root(NodeId n) const {
  check_node(n);
  std::vector<NodeId> path(static_cast<std::size_t>(stage_of_[n]));
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    *it = n;
    n = n == 1 ? 0 : (n - 2) / branching_ + 1;
  }
  return path;
}

NodeRange ScenarioTree::subtree_stage_nodes(NodeId l, Stage t_prime) const {
  check_node(l);
  const Stage t = stage_of_[l];
  if (t_prime < t || t_prime > num_stages_) {
    throw ParameterError("subtree of node " + std::to_string(l) + " has no stage " +
                         std::to_string(t_prime));
  }
  int width = 1;
  for (int k = t; k < t_prime; ++k) width *= branching_;
  const int offset = l - stage_first_[t];
  return {stage_first_[t_prime] + offset * width, width};
}

Stage ScenarioTree::lca_stage(NodeId m, NodeId n) const {
  check_node(m);
  check_node(n);
  if (stage_of_[m] != stage_of_[n]) {
    throw ParameterError("nodes " + std::to_string(m) + " and " + std::to_string(n) +
                         " lie in different stages");
  }
  if (m == n) throw ParameterError("last common ancestor needs two distinct nodes");
  Stage t = stage_of_[m];
  while (m != n) {
    m = (m - 2) / branching_ + 1;
    n = (n - 2) / branching_ + 1;
    --t;
  }
  return t;
}

ScenarioTree ScenarioTree::truncated(int num_stages) const {
  if (num_stages < 1 || num_stages > num_stages_) {
    throw ParameterError("cannot truncate a " + std::to_string(num_stages_) +
                         "-stage tree to " + std::to_string(num_stages) + " stages");
  }
  ScenarioTree tree(num_stages, branching_);
  tree.probability_.assign(probability_.begin(),
                           probability_.begin() + static_cast<long>(tree.stage_of_.size()));
  return tree;
}

}  // namespace amsp
