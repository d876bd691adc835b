#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cevem/model.hpp"

using namespace cevem;

namespace {

ErrorCode code_of(const ModelParams& p) {
  try {
    validate(p);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Validate, AcceptsTableParameters) {
  const ModelParams p = validate(1.0, 1.0, 0.5, 0.25);
  EXPECT_EQ(p.x0, 0.25);
  EXPECT_NO_THROW(validate(-1.0, 1.0, 0.75, 1.0 / 3.0));
  EXPECT_NO_THROW(validate(0.0, 2.0, 0.999, 5.0));
}

TEST(Validate, RejectsBadParameters) {
  EXPECT_EQ(code_of({0.0, 1.0, 1.0, 1.0}), ErrorCode::ExponentOutOfRange);
  EXPECT_EQ(code_of({0.0, 1.0, 0.49, 1.0}), ErrorCode::ExponentOutOfRange);
  EXPECT_EQ(code_of({1.0, 0.0, 0.5, 1.0}), ErrorCode::NonPositiveSigma);
  EXPECT_EQ(code_of({1.0, -1.0, 0.5, 1.0}), ErrorCode::NonPositiveSigma);
  EXPECT_EQ(code_of({1.0, 1.0, 0.5, 0.0}), ErrorCode::NonPositiveInitialValue);
  EXPECT_EQ(code_of({NAN, 1.0, 0.5, 1.0}), ErrorCode::NonFiniteParameter);
  EXPECT_EQ(code_of({1.0, INFINITY, 0.5, 1.0}), ErrorCode::NonPositiveSigma);
}

TEST(SimGrid, StepAndTimes) {
  const SimGrid g(9.0, 90000);
  EXPECT_DOUBLE_EQ(g.dt(), 1e-4);
  EXPECT_EQ(g.time(0), 0.0);
  EXPECT_EQ(g.time(90000), 9.0);
  EXPECT_THROW(SimGrid(0.0, 10), Error);
  EXPECT_THROW(SimGrid(1.0, 0), Error);
}

TEST(PosPow, Examples) {
  EXPECT_EQ(pos_pow(-3.0, 0.5), 0.0);
  EXPECT_EQ(pos_pow(1.0, 0.75), 1.0);
  EXPECT_EQ(pos_pow(4.0, 0.5), 2.0);
  EXPECT_EQ(pos_pow(0.0, 0.75), 0.0);
}

TEST(PosPow, MonotoneAndBoundedByOnePlusSquare) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ux(-50.0, 50.0);
  std::uniform_real_distribution<double> up(0.5, 1.0);
  for (int i = 0; i < 100000; ++i) {
    const double x = ux(gen);
    const double y = ux(gen);
    const double p = up(gen);
    if (x <= y) {
      EXPECT_LE(pos_pow(x, p), pos_pow(y, p));
    }
    const double v = pos_pow(x, p);
    EXPECT_LE(v * v, 1.0 + x * x);
  }
}

TEST(HolderGap, Examples) {
  EXPECT_DOUBLE_EQ(holder_gap_bound(4.0, 1.0, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(holder_gap(4.0, 1.0, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(holder_gap_bound(1.0, 0.0, 0.75), 3.0);
  EXPECT_DOUBLE_EQ(holder_gap(1.0, 0.0, 0.75), 1.0);
  EXPECT_NEAR(holder_gap_bound(-2.0, -5.0, 0.75), 9.0 * std::pow(3.0, 0.75), 1e-12);
  EXPECT_NEAR(holder_gap_bound(-2.0, -5.0, 0.75), 20.5, 0.05);
  EXPECT_EQ(holder_gap(-2.0, -5.0, 0.75), 0.0);
}

TEST(HolderGap, InequalityOnRandomTriples) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ux(-1e3, 1e3);
  std::uniform_real_distribution<double> up(0.5, 1.0);
  std::size_t violations = 0;
  for (int i = 0; i < 100000; ++i) {
    const double x = ux(gen);
    const double y = i % 7 == 0 ? x + 1e-9 * ux(gen) : ux(gen);
    const double p = i % 4 == 0 ? 0.5 : up(gen);
    if (!(holder_gap(x, y, p) <= holder_gap_bound(x, y, p))) ++violations;
  }
  EXPECT_EQ(violations, 0u);
}

TEST(HolderGap, HalfIsLipschitzOnPositivePart) {
  EXPECT_DOUBLE_EQ(holder_gap(2.5, -1.0, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(holder_gap_bound(2.5, -1.0, 0.5), 3.5);
}

TEST(ClosedForm, Examples) {
  EXPECT_NEAR(closed_form_ruin({1.0, 1.0, 0.5, 0.1}), 0.818731, 5e-7);
  EXPECT_EQ(closed_form_ruin({0.0, 1.0, 0.5, 1.0}), 1.0);
  EXPECT_NEAR(closed_form_ruin({1.0, 1.0, 0.5, 1.0}), 0.135335, 5e-7);
  EXPECT_NEAR(closed_form_ruin({1.0, 1.0, 0.5, 0.25}), 0.606531, 5e-7);
  EXPECT_EQ(closed_form_ruin({-1.0, 1.0, 0.5, 0.25}), 1.0);
}

TEST(ClosedForm, OnlyForHalf) {
  try {
    closed_form_ruin({1.0, 1.0, 0.75, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExponentNotHalf);
  }
}
