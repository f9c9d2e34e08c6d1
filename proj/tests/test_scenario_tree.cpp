#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <numeric>

#include "amsp/errors.hpp"
#include "amsp/scenario_tree.hpp"

using namespace amsp;

namespace {

// Independent construction: breadth-first queue, children appended in order.
struct ExplicitTree {
  std::vector<NodeId> parent{0, 0};
  std::vector<Stage> stage{0, 1};
  std::vector<std::vector<NodeId>> children{{}, {}};

  ExplicitTree(int T, int B) {
    std::deque<NodeId> queue{1};
    while (!queue.empty()) {
      const NodeId n = queue.front();
      queue.pop_front();
      if (stage[n] == T) continue;
      for (int k = 0; k < B; ++k) {
        const NodeId c = static_cast<NodeId>(parent.size());
        parent.push_back(n);
        stage.push_back(stage[n] + 1);
        children.emplace_back();
        children[n].push_back(c);
        queue.push_back(c);
      }
    }
  }
  int size() const { return static_cast<int>(parent.size()) - 1; }
  bool is_descendant(NodeId m, NodeId l) const {
    while (m != 0 && m != l) m = parent[m];
    return m == l;
  }
};

}  // namespace

TEST(ScenarioTree, MatchesBreadthFirstConstruction) {
  for (auto [T, B] : {std::pair{1, 1}, {4, 1}, {4, 3}, {5, 2}, {3, 5}}) {
    const ScenarioTree tree = ScenarioTree::uniform(T, B);
    const ExplicitTree oracle(T, B);
    ASSERT_EQ(tree.num_nodes(), oracle.size());
    for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
      EXPECT_EQ(tree.parent(n), oracle.parent[n]) << "node " << n;
      EXPECT_EQ(tree.stage(n), oracle.stage[n]) << "node " << n;
      const std::vector<NodeId> kids =
          tree.stage(n) < T ? tree.children(n).to_vector() : std::vector<NodeId>{};
      EXPECT_EQ(kids, oracle.children[n]) << "node " << n;
    }
  }
}

TEST(ScenarioTree, StageNodesAreContiguousAndSized) {
  const ScenarioTree tree = ScenarioTree::uniform(5, 3);
  NodeId expected_first = 1;
  int width = 1;
  for (Stage t = 1; t <= 5; ++t) {
    const NodeRange r = tree.stage_nodes(t);
    EXPECT_EQ(r.first, expected_first);
    EXPECT_EQ(r.size, width);
    for (NodeId n : r) EXPECT_EQ(tree.stage(n), t);
    expected_first += width;
    width *= 3;
  }
  EXPECT_EQ(tree.num_nodes(), 1 + 3 + 9 + 27 + 81);
}

TEST(ScenarioTree, UniformProbabilitiesSumToOnePerStage) {
  const ScenarioTree tree = ScenarioTree::uniform(4, 3);
  for (Stage t = 1; t <= 4; ++t) {
    double sum = 0.0;
    for (NodeId n : tree.stage_nodes(t)) sum += tree.probability(n);
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(tree.probability(1), 1.0);
  EXPECT_DOUBLE_EQ(tree.probability(tree.num_nodes()), 1.0 / 27.0);
}

TEST(ScenarioTree, PathToRoot) {
  const ScenarioTree tree = ScenarioTree::uniform(4, 2);
  const ExplicitTree oracle(4, 2);
  for (NodeId n = 1; n <= tree.num_nodes(); ++n) {
    std::vector<NodeId> expected;
    for (NodeId m = n; m != 0; m = oracle.parent[m]) expected.push_back(m);
    std::reverse(expected.begin(), expected.end());
    EXPECT_EQ(tree.path_to_root(n), expected);
    EXPECT_EQ(static_cast<int>(tree.path_to_root(n).size()), tree.stage(n));
  }
}

TEST(ScenarioTree, SubtreeSlicesMatchDescendantSets) {
  for (auto [T, B] : {std::pair{5, 2}, {4, 3}}) {
    const ScenarioTree tree = ScenarioTree::uniform(T, B);
    const ExplicitTree oracle(T, B);
    for (NodeId l = 1; l <= tree.num_nodes(); ++l) {
      for (Stage t = tree.stage(l); t <= T; ++t) {
        std::vector<NodeId> expected;
        for (NodeId m : tree.stage_nodes(t)) {
          if (oracle.is_descendant(m, l)) expected.push_back(m);
        }
        EXPECT_EQ(tree.subtree_stage_nodes(l, t).to_vector(), expected) << l << "@" << t;
      }
    }
  }
}

TEST(ScenarioTree, LcaStageMatchesPathIntersection) {
  const ScenarioTree tree = ScenarioTree::uniform(4, 3);
  for (Stage t = 2; t <= 4; ++t) {
    for (NodeId m : tree.stage_nodes(t)) {
      for (NodeId n : tree.stage_nodes(t)) {
        if (m == n) continue;
        const auto pm = tree.path_to_root(m);
        const auto pn = tree.path_to_root(n);
        Stage common = 0;
        while (common < t && pm[static_cast<std::size_t>(common)] == pn[static_cast<std::size_t>(common)]) ++common;
        EXPECT_EQ(tree.lca_stage(m, n), common);
      }
    }
  }
}

TEST(ScenarioTree, TruncationKeepsIdsAndProbabilities) {
  const ScenarioTree tree = ScenarioTree::uniform(5, 2);
  const ScenarioTree cut = tree.truncated(3);
  EXPECT_EQ(cut.num_stages(), 3);
  EXPECT_EQ(cut.num_nodes(), 7);
  for (NodeId n = 1; n <= 7; ++n) {
    EXPECT_EQ(cut.parent(n), tree.parent(n));
    EXPECT_DOUBLE_EQ(cut.probability(n), tree.probability(n));
  }
  EXPECT_THROW(tree.truncated(6), ParameterError);
  EXPECT_THROW(tree.truncated(0), ParameterError);
}

TEST(ScenarioTree, ImportedProbabilities) {
  const ScenarioTree tree = ScenarioTree::with_probabilities(2, 2, {1.0, 0.3, 0.7});
  EXPECT_DOUBLE_EQ(tree.probability(3), 0.7);
  EXPECT_THROW(ScenarioTree::with_probabilities(2, 2, {1.0, 0.3, 0.6}), ParameterError);
  EXPECT_THROW(ScenarioTree::with_probabilities(2, 2, {1.0, 0.5}), ParameterError);
  EXPECT_THROW(ScenarioTree::with_probabilities(2, 2, {1.0, -0.5, 1.5}), ParameterError);
}

TEST(ScenarioTree, RejectsInvalidShapesAndNodes) {
  EXPECT_THROW(ScenarioTree::uniform(0, 2), ParameterError);
  EXPECT_THROW(ScenarioTree::uniform(3, 0), ParameterError);
  const ScenarioTree tree = ScenarioTree::uniform(3, 2);
  EXPECT_THROW(tree.stage(0), ParameterError);
  EXPECT_THROW(tree.stage(8), ParameterError);
  EXPECT_EQ(tree.parent(1), 0);
}
