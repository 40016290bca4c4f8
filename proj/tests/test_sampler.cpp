#include <gtest/gtest.h>

#include <cmath>

#include "kubilius/errors.hpp"
#include "kubilius/moments.hpp"
#include "kubilius/sampler.hpp"
#include "support.hpp"

using namespace kubilius;

namespace {

constexpr double kRejectLevel = 1e-4;

SamplerConfig config_for(const AssemblyClass& cls, std::size_t n, std::uint64_t seed) {
  SamplerConfig config;
  config.seed = seed;
  // Unclamped root: the nominal radius of set partitions is far below the tilt
  // that makes size n typical.
  config.tilt = solve_tilt(cls, n, 1e6).x;
  return config;
}

std::vector<double> exact_pmf(const AssemblyClass& cls, std::size_t n, std::size_t j) {
  const CountingEngine engine(cls);
  std::vector<double> p;
  for (const auto& x : comp_count_pmf(engine, n, j, Mode::exact).p) p.push_back(x.to_double());
  return p;
}

}  // namespace

TEST(Tilt, Examples) {
  EXPECT_NEAR(tune_tilt(builtin_class("permutations"), 1).x, 1.0, 1e-9);
  const auto graphs = tune_tilt(builtin_class("two_regular_graphs"), 3);
  EXPECT_TRUE(graphs.clamped);
  EXPECT_EQ(graphs.x, 1.0);
  EXPECT_NEAR(solve_tilt(builtin_class("two_regular_graphs"), 3, 10.0).x, std::cbrt(6.0), 1e-8);
  const auto zero = AssemblyClass("zero", "", "0", Rho(), [](std::size_t) { return Rational(0); });
  EXPECT_THROW(tune_tilt(zero, 5), InvalidArgument);
}

TEST(Tilt, SolvesEquation) {
  const auto perm = builtin_class("permutations");
  const double x = tune_tilt(perm, 20).x;
  double sum = 0;
  for (int j = 1; j <= 20; ++j) sum += std::pow(x, j);
  EXPECT_NEAR(sum, 20.0, 1e-8);
}

TEST(Sampler, Basics) {
  SamplerConfig config;
  config.seed = 1;
  const auto one = sample_profile(builtin_class("permutations"), 1, config);
  EXPECT_EQ(one.profile.s, (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(sample_profile(builtin_class("two_regular_graphs"), 2, config), EmptySupportError);
  config.tilt = 0;
  EXPECT_THROW(validate(config), InvalidArgument);
}

TEST(Sampler, RejectionLimit) {
  SamplerConfig config;
  config.seed = 3;
  config.tilt = 1e-3;
  config.max_rejections = 10;
  try {
    sample_profile(builtin_class("permutations"), 30, config);
    FAIL();
  } catch (const SamplerError& e) {
    EXPECT_GE(e.acceptance_estimate(), 0.0);
    EXPECT_LE(e.acceptance_estimate(), 1.0);
  }
}

TEST(Sampler, PermutationFixedPoints) {
  SamplerConfig config;
  config.seed = 2024;
  const auto m = sample_marginal(builtin_class("permutations"), 3, 1, 100000, config);
  const double p1 = static_cast<double>(m.counts[1]) / m.accepted;
  EXPECT_NEAR(p1, 0.5, 3 * std::sqrt(0.25 / 1e5));
}

TEST(Sampler, EmpiricalMeanOfComponents) {
  SamplerConfig config;
  config.seed = 77;
  config.tilt = tune_tilt(builtin_class("permutations"), 50).x;
  const auto stats = empirical_moments(builtin_class("permutations"), 50, builtin_family("w").at(50), 100000, config);
  const double H50 = kubilius::testing::harmonic(50).get_d();
  EXPECT_NEAR(stats.mean, H50, 4 * stats.stderr_mean);
  EXPECT_DOUBLE_EQ(stats.acceptance_rate(),
                   static_cast<double>(stats.accepted) / static_cast<double>(stats.accepted + stats.rejected));
}

TEST(Sampler, ZeroFunction) {
  SamplerConfig config;
  config.seed = 5;
  config.tilt = tune_tilt(builtin_class("mappings"), 6).x;
  const auto stats = empirical_moments(builtin_class("mappings"), 6, builtin_family("zero").at(6), 2, config);
  EXPECT_EQ(stats.mean, 0.0);
  EXPECT_EQ(stats.variance, 0.0);
  EXPECT_EQ(stats.stderr_mean, 0.0);
}

TEST(Sampler, DeterministicAcrossThreads) {
  const auto cls = builtin_class("mappings");
  SamplerConfig config;
  config.seed = 11;
  config.tilt = tune_tilt(cls, 25).x;
  const auto h = builtin_family("w").at(25);
  const auto a = empirical_moments(cls, 25, h, 5000, config);
  config.threads = 4;
  const auto b = empirical_moments(cls, 25, h, 5000, config);
  const auto c = empirical_moments(cls, 25, h, 5000, config);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_EQ(a.rejected, b.rejected);
  EXPECT_EQ(b.mean, c.mean);
}

TEST(Sampler, ChiSquareSuite) {
  for (const auto& name : builtin_class_names()) {
    const auto cls = builtin_class(name);
    const std::size_t j = name == "two_regular_graphs" ? 3 : 1;
    for (std::size_t n : {5, 12, 30}) {
      const auto config = config_for(cls, n, 1000 + n);
      const auto sample = sample_marginal(cls, n, j, 100000, config);
      const auto probs = exact_pmf(cls, n, j);
      const auto test = chi_square_test(sample.counts, probs);
      EXPECT_GT(test.p_value, kRejectLevel) << name << " n=" << n << " stat=" << test.statistic;
    }
  }
}

TEST(Sampler, TiltInvariance) {
  const auto cls = builtin_class("permutations");
  const std::size_t n = 15;
  const auto probs = exact_pmf(cls, n, 2);
  for (double tilt : {0.9, 1.0, 1.05}) {
    SamplerConfig config;
    config.seed = 500 + static_cast<std::uint64_t>(tilt * 100);
    config.tilt = tilt;
    const auto sample = sample_marginal(cls, n, 2, 50000, config);
    EXPECT_GT(chi_square_test(sample.counts, probs).p_value, kRejectLevel) << tilt;
  }
}

TEST(ChiSquare, PoolsSparseTail) {
  const std::vector<double> probs{0.5, 0.3, 0.19, 0.009, 0.001};
  const std::vector<std::uint64_t> observed{500, 300, 190, 9, 1};
  const auto t = chi_square_test(observed, probs);
  EXPECT_NEAR(t.statistic, 0.0, 1e-12);
  EXPECT_EQ(t.degrees_of_freedom, 3u);
  EXPECT_NEAR(t.p_value, 1.0, 1e-12);
  const std::vector<std::uint64_t> skewed{900, 50, 40, 9, 1};
  EXPECT_LT(chi_square_test(skewed, probs).p_value, 1e-10);
}
