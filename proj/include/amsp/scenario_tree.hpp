#pragma once

#include <cstddef>
#include <vector>

namespace amsp {

/// 1-based node index; the root is node 1 and nodes are numbered breadth-first.
using NodeId = int;
/// 1-based stage index.
using Stage = int;

/// A contiguous block of node ids [first, first + size).
///
/// Stage lists and subtree slices of a balanced tree in breadth-first order are
/// always contiguous, so ranges replace materialized vectors on hot paths.
struct NodeRange {
  NodeId first = 1;
  int size = 0;

  struct iterator {
    NodeId value;
    NodeId operator*() const { return value; }
    iterator& operator++() {
      ++value;
      return *this;
    }
    bool operator==(const iterator&) const = default;
  };

  iterator begin() const { return {first}; }
  iterator end() const { return {first + size}; }
  NodeId last() const { return first + size - 1; }
  NodeId operator[](int k) const { return first + k; }
  bool contains(NodeId n) const { return n >= first && n < first + size; }
  bool empty() const { return size == 0; }
  std::vector<NodeId> to_vector() const;
};

/// Balanced B-ary scenario tree over T stages.
///
/// Children of node n are B*(n-1)+2 ... B*n+1. Within each stage the node order is
/// depth-first consistent: the descendants of any node occupy a contiguous slice of
/// every deeper stage. Immutable after construction.
class ScenarioTree {
 public:
  /// Uniform node probabilities p_n = B^-(t_n - 1). Throws ParameterError on T == 0 or B == 0.
  static ScenarioTree uniform(int num_stages, int branching);

  /// Imported probabilities (one per node, breadth-first order). Each stage must sum to 1
  /// and children must sum to their parent's probability.
  static ScenarioTree with_probabilities(int num_stages, int branching,
                                         std::vector<double> probabilities);

  int num_stages() const { return num_stages_; }
  int branching() const { return branching_; }
  int num_nodes() const { return static_cast<int>(stage_of_.size()) - 1; }
  bool contains(NodeId n) const { return n >= 1 && n <= num_nodes(); }

  Stage stage(NodeId n) const;
  double probability(NodeId n) const;
  /// Ancestor a(n); the root has none and returns 0.
  NodeId parent(NodeId n) const;
  NodeRange children(NodeId n) const;
  NodeRange stage_nodes(Stage t) const;

  /// P(n): root, ..., a(n), n. Length equals t_n.
  std::vector<NodeId> path_to_root(NodeId n) const;

  /// S_{t'} intersected with the subtree rooted at l, in stage order; size B^(t' - t_l).
  NodeRange subtree_stage_nodes(NodeId l, Stage t_prime) const;

  /// Stage of the deepest common ancestor of two distinct nodes of the same stage.
  Stage lca_stage(NodeId m, NodeId n) const;

  /// The tree restricted to stages 1..num_stages. Node ids are preserved.
  ScenarioTree truncated(int num_stages) const;

 private:
  ScenarioTree(int num_stages, int branching);
  void check_node(NodeId n) const;

  int num_stages_ = 0;
  int branching_ = 0;
  std::vector<NodeId> stage_first_;  // stage_first_[t] = first node of stage t; size T+2
  std::vector<Stage> stage_of_;      // index 0 unused
  std::vector<double> probability_;  // index 0 unused
};

}  // namespace amsp
