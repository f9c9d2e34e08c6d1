#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>
#include <tuple>

#include "amsp/errors.hpp"
#include "amsp/instance.hpp"
#include "amsp/instance_io.hpp"
#include "amsp/problems.hpp"

using namespace amsp;

namespace {

std::uint64_t binomial(int n, int k) {
  std::uint64_t v = 1;
  for (int j = 1; j <= k; ++j) v = v * static_cast<std::uint64_t>(n - k + j) / static_cast<std::uint64_t>(j);
  return v;
}

using TermKey = std::tuple<int, NodeId, int, double>;

std::vector<TermKey> sorted_terms(const NodeRow& row) {
  std::vector<TermKey> out;
  for (const NodeTerm& t : row.terms) {
    out.emplace_back(static_cast<int>(t.block), t.node, t.index, t.coef);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void expect_same_instance(const AmspInstance& a, const AmspInstance& b) {
  EXPECT_EQ(a.name, b.name);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.tree.num_stages(), b.tree.num_stages());
  EXPECT_EQ(a.tree.branching(), b.tree.branching());
  ASSERT_EQ(a.num_states(), b.num_states());
  ASSERT_EQ(a.num_stage_vars(), b.num_stage_vars());
  for (int i = 0; i < a.num_states(); ++i) {
    EXPECT_EQ(a.state_vars[i].name, b.state_vars[i].name);
    EXPECT_EQ(a.state_vars[i].big_m, b.state_vars[i].big_m);
    EXPECT_EQ(a.state_vars[i].integer, b.state_vars[i].integer);
    EXPECT_EQ(a.state_vars[i].upper, b.state_vars[i].upper);
  }
  for (int j = 0; j < a.num_stage_vars(); ++j) {
    EXPECT_EQ(a.stage_vars[j].upper, b.stage_vars[j].upper);
    EXPECT_EQ(a.stage_vars[j].lower, b.stage_vars[j].lower);
  }
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  for (NodeId n = 1; n <= a.tree.num_nodes(); ++n) {
    EXPECT_DOUBLE_EQ(a.tree.probability(n), b.tree.probability(n));
    const NodeData& da = a.node(n);
    const NodeData& db = b.node(n);
    EXPECT_EQ(da.state_cost, db.state_cost);
    EXPECT_EQ(da.stage_cost, db.stage_cost);
    ASSERT_EQ(da.rows.size(), db.rows.size());
    for (std::size_t r = 0; r < da.rows.size(); ++r) {
      EXPECT_EQ(da.rows[r].name, db.rows[r].name);
      EXPECT_EQ(da.rows[r].sense, db.rows[r].sense);
      EXPECT_EQ(da.rows[r].rhs, db.rows[r].rhs);
      EXPECT_EQ(sorted_terms(da.rows[r]), sorted_terms(db.rows[r]));
    }
  }
  ASSERT_EQ(a.bounds.size(), b.bounds.size());
}

}  // namespace

TEST(RevisionSchedule, FromRevisionStages) {
  const RevisionSchedule s = RevisionSchedule::from_revision_stages(5, {{3, 5}, {}});
  EXPECT_EQ(s.num_states(), 2);
  const std::vector<int> expected = {0, 0, 1, 1, 2};
  for (Stage t = 1; t <= 5; ++t) {
    EXPECT_EQ(s.at(0, t), expected[static_cast<std::size_t>(t - 1)]);
    EXPECT_EQ(s.at(1, t), 0);
  }
  EXPECT_EQ(s.revision_stages(0), (std::vector<Stage>{3, 5}));
  EXPECT_EQ(s.revisions(0), 2);
  EXPECT_EQ(s.to_string(), "(3 5);()");
  EXPECT_TRUE(s.is_valid(2));
  EXPECT_FALSE(s.is_valid(1));
  EXPECT_THROW(s.validate(1), ParameterError);
  EXPECT_THROW(RevisionSchedule::from_revision_stages(5, {{1}}), ParameterError);
  EXPECT_THROW(RevisionSchedule::from_revision_stages(5, {{4, 3}}), ParameterError);
  EXPECT_THROW(RevisionSchedule::from_revision_stages(5, {{6}}), ParameterError);
}

TEST(RevisionSchedule, ValidityRules) {
  RevisionSchedule s(1, 4);
  EXPECT_TRUE(s.is_valid(0));
  s.set(0, 1, 1);
  EXPECT_FALSE(s.is_valid(3));
  s.set(0, 1, 0);
  s.set(0, 3, 2);
  s.set(0, 4, 2);
  EXPECT_FALSE(s.is_valid(3));  // step of two
  s.set(0, 2, 1);
  EXPECT_TRUE(s.is_valid(2));
  EXPECT_THROW(s.set(0, 5, 1), ParameterError);
}

TEST(RevisionSchedule, PaddingUsesLatestFreeStages) {
  const RevisionSchedule r = RevisionSchedule::from_revision_stages(6, {{3}, {}, {5, 6}});
  const RevisionSchedule p = pad_revisions(r, 3);
  EXPECT_EQ(p.revision_stages(0), (std::vector<Stage>{3, 5, 6}));
  EXPECT_EQ(p.revision_stages(1), (std::vector<Stage>{4, 5, 6}));
  EXPECT_EQ(p.revision_stages(2), (std::vector<Stage>{4, 5, 6}));
  EXPECT_EQ(pad_revisions(p, 3), p);
  EXPECT_EQ(pad_revisions(RevisionSchedule(1, 3), 2).revision_stages(0),
            (std::vector<Stage>{2, 3}));
  EXPECT_THROW(pad_revisions(p, 2), ParameterError);
}

TEST(RevisionSchedule, EnumerationCounts) {
  for (int T = 1; T <= 7; ++T) {
    for (int mu = 0; mu < T; ++mu) {
      std::uint64_t at_most = 0;
      for (int k = 0; k <= mu; ++k) at_most += binomial(T - 1, k);
      const auto all = enumerate_schedules(1, T, mu, false);
      const auto exact = enumerate_schedules(1, T, mu, true);
      EXPECT_EQ(all.size(), at_most);
      EXPECT_EQ(exact.size(), binomial(T - 1, mu));
      std::set<RevisionSchedule> unique(all.begin(), all.end());
      EXPECT_EQ(unique.size(), all.size());
      for (const auto& s : all) EXPECT_TRUE(s.is_valid(mu));
      for (const auto& s : exact) EXPECT_EQ(s.revisions(0), mu);
    }
  }
  EXPECT_EQ(enumerate_schedules(1, 5, 2, true).size(), 6u);
  EXPECT_EQ(enumerate_schedules(2, 5, 2, true).size(), 36u);
  EXPECT_EQ(enumerate_schedules(3, 4, 1, false).size(), 64u);
}

TEST(RevisionSchedule, EnumerationGuard) {
  EXPECT_THROW(enumerate_schedules(3, 10, 4, false, 10000), GuardExceeded);
  EXPECT_THROW(enumerate_schedules(1, 5, 2, false, 5), GuardExceeded);
  EXPECT_THROW(enumerate_schedules(1, 5, 5, false), ParameterError);
  EXPECT_NO_THROW(enumerate_schedules(1, 10, 4, false, 10000));
}

TEST(AmspInstance, ValidateCatchesBrokenData) {
  const ScenarioTree tree = ScenarioTree::uniform(3, 2);
  const AmspInstance good = gen_lotsizing(tree, 2, 5, 1);
  EXPECT_NO_THROW(good.validate());

  AmspInstance bad = good;
  bad.mu = 3;
  EXPECT_THROW(bad.validate(), ParameterError);

  bad = good;
  bad.state_vars[0].upper = 2.0;
  EXPECT_THROW(bad.validate(), ParameterError);

  bad = good;
  bad.nodes.pop_back();
  EXPECT_THROW(bad.validate(), ParameterError);

  bad = good;
  bad.node(4).stage_cost.push_back(1.0);
  EXPECT_THROW(bad.validate(), ParameterError);

  bad = good;
  bad.node(4).rows[0].terms.push_back({3, VarBlock::stage, 0, 1.0});  // node 3 is not on P(4)
  EXPECT_THROW(bad.validate(), ParameterError);

  bad = good;
  bad.node(2).rows[0].terms.push_back({1, VarBlock::state, 7, 1.0});
  EXPECT_THROW(bad.validate(), ParameterError);

  bad = good;
  bad.bounds.push_back({9, VarBlock::stage, 0, 0.0, 1.0});
  EXPECT_THROW(bad.validate(), ParameterError);
}

TEST(AmspInstance, TruncationKeepsPrefix) {
  const AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(4, 2), 1, 3, 3);
  const AmspInstance cut = inst.truncated(2);
  EXPECT_EQ(cut.num_stages(), 2);
  EXPECT_EQ(cut.mu, 1);
  ASSERT_EQ(cut.nodes.size(), 3u);
  for (NodeId n = 1; n <= 3; ++n) EXPECT_EQ(cut.node(n).stage_cost, inst.node(n).stage_cost);
  EXPECT_NO_THROW(cut.validate());
}

TEST(InstanceIo, JsonRoundTripLotSizing) {
  AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(3, 2), 2, 9, 1);
  inst.bounds.push_back({2, VarBlock::stage, 1, 0.5, kInfinity});
  std::stringstream ss;
  write_instance(ss, inst);
  const AmspInstance back = read_instance(ss);
  expect_same_instance(inst, back);
  EXPECT_EQ(back.bounds.front().upper, kInfinity);
  EXPECT_EQ(back.bounds.front().lower, 0.5);
}

TEST(InstanceIo, JsonRoundTripGepViaFile) {
  const AmspInstance inst = gen_gep(ScenarioTree::uniform(3, 2), 4, {}, 2);
  const auto path = std::filesystem::temp_directory_path() / "amsp_io_roundtrip.json";
  save_instance(path, inst);
  const AmspInstance back = load_instance(path);
  std::filesystem::remove(path);
  expect_same_instance(inst, back);
}

TEST(InstanceIo, NonUniformProbabilitiesSurvive) {
  AmspInstance inst = gen_lotsizing(ScenarioTree::uniform(2, 2), 1, 1);
  inst.tree = ScenarioTree::with_probabilities(2, 2, {1.0, 0.25, 0.75});
  std::stringstream ss;
  write_instance(ss, inst);
  EXPECT_DOUBLE_EQ(read_instance(ss).tree.probability(3), 0.75);
}

TEST(InstanceIo, MalformedInputThrowsParameterError) {
  const std::vector<std::string> broken = {
      "",
      "{",
      "[]",
      R"({"name": "x"})",
      R"({"name": "x", "mu": 0, "tree": {"T": 1, "B": 1}, "state_vars": [], "stage_vars": [],
          "node_data": []})",
      R"({"name": "x", "mu": 0, "tree": {"T": 1, "B": 1}, "state_vars": [], "stage_vars": [],
          "node_data": [{"node": 1, "a": [], "b": [], "rows": [{"name": "r", "x": [], "y": [],
          "sense": "<>", "rhs": 0}]}]})",
  };
  for (const std::string& text : broken) {
    std::istringstream is(text);
    EXPECT_THROW(read_instance(is), ParameterError) << text;
  }
  EXPECT_THROW(load_instance("/nonexistent/path/instance.json"), ParameterError);
}
