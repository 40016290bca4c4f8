#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kubilius/conditions.hpp"
#include "kubilius/counting.hpp"
#include "kubilius/errors.hpp"

using namespace kubilius;

namespace {

WeaklyLogParams params(Rho rho, Rational Theta, Rational theta, Number theta_prime, std::size_t n0) {
  WeaklyLogParams p;
  p.rho = std::move(rho);
  p.Theta = Theta;
  p.theta = theta;
  p.theta_prime = theta_prime;
  p.n0 = n0;
  return p;
}

}  // namespace

TEST(CheckCondition, PermutationsStrong) {
  const auto v = check_condition(builtin_class("permutations"),
                                 params(Rho(), 1, 1, Number(Rational(1, 3)), 1),
                                 ConditionId::strong, 100);
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(v.exact_comparison);
  EXPECT_EQ(v.checked_range, 100u);
}

TEST(CheckCondition, TwoRegularGraphsLowerSum) {
  const auto v = check_condition(builtin_class("two_regular_graphs"),
                                 params(Rho(), 1, Rational(1, 4), Number(Rational(1)), 4),
                                 ConditionId::lower_sum, 200);
  EXPECT_TRUE(v.holds);
  ASSERT_TRUE(v.witness);
  // (n-2)/2 - n/4 is tight at n = 4.
  EXPECT_EQ(v.witness->index, 4u);
  EXPECT_EQ(v.witness->lhs.exact(), Rational(1));
  // n0 = 3 fails: (3-2)/2 < 3/4.
  const auto bad = check_condition(builtin_class("two_regular_graphs"),
                                   params(Rho(), 1, Rational(1, 4), Number(Rational(1)), 3),
                                   ConditionId::lower_sum, 200);
  EXPECT_FALSE(bad.holds);
  EXPECT_EQ(bad.witness->index, 3u);
}

TEST(CheckCondition, ForestsLowerSumFails) {
  const auto v = check_condition(builtin_class("forests"),
                                 params(Rho::exp_of(-1), 1, Rational(1, 10), Number(Rational(1)), 10),
                                 ConditionId::lower_sum, 2000);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_GE(v.witness->index, 10u);
  EXPECT_LT(v.witness->lhs.to_double(), v.witness->rhs.to_double());
  EXPECT_FALSE(v.exact_comparison);
}

TEST(CheckCondition, LowerSumRangeTooShort) {
  EXPECT_THROW(check_condition(builtin_class("permutations"), params(Rho(), 1, 1, Number(1.0), 50),
                               ConditionId::lower_sum, 10),
               InvalidArgument);
}

TEST(CheckCondition, WitnessReproducesUpperViolation) {
  // mappings at rho = 1/2 < 1/e: rho^j j lambda_j decays; at rho = 1 it grows.
  const auto cls = builtin_class("mappings");
  const auto v = check_condition(cls, params(Rho::exact(1), 2, 1, Number(1.0), 1), ConditionId::upper, 30);
  ASSERT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  const std::size_t j = v.witness->index;
  EXPECT_EQ(v.witness->lhs.exact(), Rational(static_cast<unsigned long>(j)) * cls.lambda(j));
  EXPECT_EQ(v.witness->rhs.exact(), Rational(2));
  // Extremal index: the maximum over the range.
  EXPECT_EQ(j, 30u);
}

TEST(CheckCondition, WitnessReproducesQLower) {
  const auto cls = builtin_class("permutations");
  const auto v = check_condition(cls, params(Rho(), 1, 1, Number(0.5), 1), ConditionId::q_lower, 50);
  ASSERT_FALSE(v.holds);  // n e^{-H_n} at n = 1 is e^{-1} < 1/2
  EXPECT_EQ(v.witness->index, 1u);
  EXPECT_DOUBLE_EQ(v.witness->lhs.to_double(), 1.0);
  EXPECT_NEAR(v.witness->rhs.to_double(), 0.5 * std::exp(1.0), 1e-14);
  EXPECT_EQ(v.tolerance, kConditionTolerance);
}

TEST(CheckCondition, QLowerSkipsEmptyOrders) {
  const auto cls = builtin_class("two_regular_graphs");
  const auto v = check_condition(cls, params(Rho(), 1, 1, Number(0.01), 1), ConditionId::q_lower, 20);
  EXPECT_EQ(v.skipped_orders, (std::vector<std::size_t>{1, 2}));
}

TEST(CheckCondition, MonotoneInConstants) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> num(1, 40);
  const auto cls = builtin_class("two_regular_graphs");
  for (int trial = 0; trial < 40; ++trial) {
    const Rational Theta(num(rng), 40);
    const Rational theta(num(rng), 40);
    const auto upper = check_condition(cls, params(Rho(), Theta, theta, Number(1.0), 4), ConditionId::upper, 80);
    const auto lower = check_condition(cls, params(Rho(), Theta, theta, Number(1.0), 4), ConditionId::lower_sum, 80);
    const Rational bigger = Theta + Rational(num(rng), 100);
    const Rational smaller = theta * Rational(num(rng), 40);
    if (upper.holds) {
      EXPECT_TRUE(check_condition(cls, params(Rho(), bigger, theta, Number(1.0), 4), ConditionId::upper, 80).holds);
    }
    if (lower.holds) {
      EXPECT_TRUE(check_condition(cls, params(Rho(), Theta, smaller, Number(1.0), 4), ConditionId::lower_sum, 80).holds);
    }
  }
}

TEST(SuggestConstants, Permutations) {
  const auto s = suggest_constants(builtin_class("permutations"), Rho(), 100);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->Theta.to_double(), 1.0);
  EXPECT_EQ(s->theta.to_double(), 1.0);
  EXPECT_EQ(s->n0, 1u);
  EXPECT_NEAR(s->theta_prime.to_double(), std::exp(-1.0), 1e-9);
}

TEST(SuggestConstants, TwoRegularGraphs) {
  const auto s = suggest_constants(builtin_class("two_regular_graphs"), Rho(), 200);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->Theta.to_double(), 0.5);
}

TEST(SuggestConstants, SetPartitionsAbsent) {
  EXPECT_FALSE(suggest_constants(builtin_class("set_partitions"), Rho(), 100));
  EXPECT_TRUE(search_constants(builtin_class("set_partitions"), Rho(), 100).degenerate);
}

TEST(SuggestConstants, FedBackTheyHold) {
  for (const char* name : {"permutations", "two_regular_graphs"}) {
    const auto cls = builtin_class(name);
    const auto s = suggest_constants(cls, cls.rho(), 150);
    ASSERT_TRUE(s) << name;
    for (auto c : {ConditionId::upper, ConditionId::lower_sum, ConditionId::q_lower})
      EXPECT_TRUE(check_condition(cls, *s, c, 150).holds) << name << ' ' << to_string(c);
  }
  // Condition (1) applies only where lambda_j > 0 for all j.
  const auto perm = builtin_class("permutations");
  EXPECT_TRUE(check_condition(perm, *suggest_constants(perm, Rho(), 150), ConditionId::strong, 150).holds);
}

TEST(ConditionId, Parsing) {
  EXPECT_EQ(parse_condition("3"), ConditionId::lower_sum);
  EXPECT_EQ(parse_condition("q_lower"), ConditionId::q_lower);
  EXPECT_THROW(parse_condition("5"), InvalidArgument);
}
