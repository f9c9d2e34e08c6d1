#include <gtest/gtest.h>

#include <sstream>

#include "amsp/errors.hpp"
#include "amsp/linear_model.hpp"

using namespace amsp;

TEST(LinearModel, MergesDuplicateTermsAndDropsZeros) {
  LinearModel m;
  const VarId x = m.add_variable("x", 0, 10, false, 1.0);
  const VarId y = m.add_variable("y", 0, 10, true, 2.0);
  const RowId r = m.add_row("r", {{y, 1.0}, {x, 2.0}, {x, 3.0}, {y, -1.0}}, RowSense::leq, 4.0);
  ASSERT_EQ(m.row(r).terms.size(), 1u);
  EXPECT_EQ(m.row(r).terms[0].var, x);
  EXPECT_DOUBLE_EQ(m.row(r).terms[0].coef, 5.0);
  EXPECT_EQ(m.num_integer(), 1);
  m.relax_integrality();
  EXPECT_FALSE(m.has_integers());
}

TEST(LinearModel, RejectsUnknownVariablesAndBadBounds) {
  LinearModel m;
  m.add_variable("x", 0, 1, false);
  EXPECT_THROW(m.add_row("r", {{1, 1.0}}, RowSense::eq, 0.0), ParameterError);
  EXPECT_THROW(m.add_row("r", {{-1, 1.0}}, RowSense::eq, 0.0), ParameterError);
  EXPECT_THROW(m.add_variable("z", 2, 1, false), ParameterError);
}

TEST(LinearModel, EvaluatesObjectiveAndViolation) {
  LinearModel m;
  const VarId x = m.add_variable("x", 0, 5, false, 3.0);
  const VarId y = m.add_variable("y", -kInfinity, kInfinity, false, -1.0);
  m.set_objective_offset(7.0);
  m.add_row("le", {{x, 1.0}, {y, 1.0}}, RowSense::leq, 4.0);
  m.add_row("ge", {{x, 1.0}}, RowSense::geq, 1.0);
  m.add_row("eq", {{y, 2.0}}, RowSense::eq, 2.0);
  EXPECT_DOUBLE_EQ(m.evaluate_objective({2.0, 1.0}), 7.0 + 6.0 - 1.0);
  EXPECT_DOUBLE_EQ(m.max_violation({2.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(m.max_violation({4.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(m.max_violation({0.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(m.max_violation({1.0, 2.5}), 3.0);
  EXPECT_DOUBLE_EQ(m.max_violation({7.0, -3.0}), 8.0);
}

TEST(LinearModel, WritesReadableText) {
  LinearModel m;
  const VarId x = m.add_variable("x", 0, 1, true, 1.0);
  m.add_row("cap", {{x, -2.0}}, RowSense::geq, -1.0);
  std::ostringstream os;
  m.write_lp(os);
  const std::string text = os.str();
  EXPECT_NE(text.find("cap: - 2 x >= -1"), std::string::npos) << text;
  EXPECT_NE(text.find("x"), std::string::npos);
}
