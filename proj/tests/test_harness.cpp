#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "amsp/errors.hpp"
#include "amsp/harness.hpp"
#include "amsp/instance_io.hpp"

using namespace amsp;

namespace {

const std::string& total_cell(const Report& r) { return r.rows.back().back(); }

}  // namespace

TEST(Harness, CountReport) {
  EXPECT_EQ(total_cell(count_nacs_report(5, 2, 2, 1, NacRegime::reduced)), "44");
  EXPECT_EQ(total_cell(count_nacs_report(10, 3, 2, 1, NacRegime::reduced)), "44256");
  EXPECT_EQ(total_cell(count_nacs_report(5, 2, 4, 1, NacRegime::reduced)), "0");
  EXPECT_EQ(total_cell(count_nacs_report(5, 2, 2, 3, NacRegime::reduced)), "132");
  const Report full = count_nacs_report(10, 2, 0, 1, NacRegime::full);
  EXPECT_EQ(total_cell(full), "688810");
  ASSERT_EQ(full.rows.size(), 10u);
  EXPECT_EQ(full.cell(0, "t2"), "2");
  EXPECT_EQ(full.cell(0, "t7"), "4032");
  EXPECT_EQ(full.cell(8, "t10"), "512");
  EXPECT_EQ(full.cell(8, "t9"), "");
  EXPECT_EQ(full.cell(9, "ancestor_stage"), "total");
  EXPECT_THROW(count_nacs_report(5, 2, 2, 0, NacRegime::reduced), ParameterError);
}

TEST(Harness, Parsing) {
  EXPECT_EQ(parse_problem("gep"), ProblemKind::gep);
  EXPECT_EQ(parse_method("decomposition"), Method::decomposition);
  for (Method m : {Method::direct_full, Method::direct_reduced, Method::decomposition}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  for (ProblemKind p : {ProblemKind::lotsizing, ProblemKind::gep, ProblemKind::file}) {
    EXPECT_EQ(parse_problem(to_string(p)), p);
  }
  EXPECT_THROW(parse_problem("knapsack"), ParameterError);
  EXPECT_THROW(parse_method("simplex"), ParameterError);
}

TEST(Harness, ConfigValidationAndHash) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  const std::string h = c.hash();
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h.find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_EQ(ExperimentConfig{}.hash(), h);
  ExperimentConfig d = c;
  d.seeds = {2};
  EXPECT_NE(d.hash(), h);
  d = c;
  d.decomposition.epsilon = 1e-4;
  EXPECT_NE(d.hash(), h);

  ExperimentConfig bad = c;
  bad.seeds.clear();
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = c;
  bad.mu_values = {5};
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = c;
  bad.problem = ProblemKind::file;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = c;
  bad.decomposition.epsilon = 0.0;
  EXPECT_THROW(bad.validate(), ParameterError);

  c.mu_values.clear();
  EXPECT_EQ(c.resolved_mu_values(), (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Harness, CsvQuoting) {
  Report r;
  r.columns = {"a", "b"};
  r.add({"plain", "has,comma \"quoted\""});
  std::ostringstream os;
  r.write_csv(os);
  EXPECT_EQ(os.str(), "a,b\nplain,\"has,comma \"\"quoted\"\"\"\n");
  EXPECT_THROW(r.add({"one"}), std::logic_error);
  EXPECT_THROW(r.column("c"), std::out_of_range);
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(kInfinity), "inf");
}

TEST(Harness, VamsSweepEndpointsAndMonotonicity) {
  auto solver = make_solver();
  ExperimentConfig c;
  c.num_stages = 4;
  c.mu_values.clear();
  c.seeds = {1, 2, 3};
  const Report r = vams_sweep(c, *solver);
  ASSERT_EQ(r.rows.size(), 3u * 4u + 4u);
  for (std::size_t k = 0; k < 12; ++k) {
    const std::string flag = r.cell(k, "flag");
    EXPECT_TRUE(flag.empty() || flag == "degenerate") << flag;
    EXPECT_EQ(r.cell(k, "status"), "optimal");
    const double v = std::stod(r.cell(k, "vams"));
    const int mu = std::stoi(r.cell(k, "mu"));
    if (mu == 0 && flag.empty()) EXPECT_NEAR(v, 0.0, 1e-4);
    if (mu == 3) EXPECT_NEAR(v, 100.0, 1e-4);
    if (mu > 0) EXPECT_GE(v, std::stod(r.cell(k - 1, "vams")) - 1e-4);
  }
  EXPECT_EQ(r.cell(12, "seed"), "mean");
  EXPECT_EQ(r.cell(15, "flag"), "averaged-over-3");
}

TEST(Harness, EnumerateRevisionsFindsDirectOptimum) {
  auto solver = make_solver();
  ExperimentConfig c;
  c.num_stages = 5;
  c.mu_values = {2};
  c.seeds = {4};
  const Report r = enumerate_revisions(c, *solver);
  ASSERT_EQ(r.rows.size(), 7u);
  EXPECT_EQ(r.cell(6, "schedule"), "direct");
  EXPECT_EQ(r.cell(6, "best"), "1");
  int best = 0;
  for (std::size_t k = 0; k < 6; ++k) best += r.cell(k, "best") == "1";
  EXPECT_GE(best, 1);
}

TEST(Harness, EnumerationGuardFiresBeforeSolving) {
  auto solver = make_solver();
  ExperimentConfig c;
  c.num_stages = 10;
  c.num_states = 3;
  c.mu_values = {4};
  EXPECT_THROW(enumerate_revisions(c, *solver), GuardExceeded);
}

TEST(Harness, CompareMethodsAgree) {
  auto solver = make_solver();
  ExperimentConfig c;
  c.num_stages = 4;
  c.num_states = 2;
  c.mu_values = {1, 2};
  c.seeds = {5};
  c.methods = {Method::direct_full, Method::direct_reduced, Method::decomposition};
  c.decomposition = DecompositionConfig::exact();
  std::vector<MethodResult> results;
  const Report r = compare_methods(c, *solver, &results);
  ASSERT_EQ(r.rows.size(), 6u);
  ASSERT_EQ(results.size(), 6u);
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    EXPECT_EQ(r.cell(k, "agree"), "1") << k;
    EXPECT_EQ(r.cell(k, "status"), "optimal");
  }
  EXPECT_TRUE(results[2].decomposition.has_value());
  EXPECT_FALSE(r.cell(2, "iterations").empty());
  EXPECT_EQ(r.cell(1, "nac_count"), std::to_string(count_total(4, 2, NacRegime::reduced, 1, 2)));
  EXPECT_EQ(r.cell(0, "nac_count"), std::to_string(count_total(4, 2, NacRegime::full, 1, 2)));
}

TEST(Harness, FileProblemRoundTrip) {
  auto solver = make_solver();
  const auto path = std::filesystem::temp_directory_path() / "amsp_harness_instance.json";
  ExperimentConfig gen;
  gen.num_stages = 3;
  save_instance(path, gen.make_instance(7, 0));
  ExperimentConfig from_file;
  from_file.problem = ProblemKind::file;
  from_file.instance_path = path.string();
  from_file.num_stages = 3;
  gen.seeds = from_file.seeds = {7};
  gen.mu_values = from_file.mu_values = {1};
  const Report a = compare_methods(gen, *solver);
  const Report b = compare_methods(from_file, *solver);
  std::filesystem::remove(path);
  EXPECT_EQ(a.cell(0, "objective"), b.cell(0, "objective"));
}
