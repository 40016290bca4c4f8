#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "kubilius/assembly_class.hpp"
#include "kubilius/errors.hpp"

using namespace kubilius;

TEST(BuiltinClass, SpecExamples) {
  EXPECT_EQ(builtin_class("permutations").lambda(3), Rational(1, 3));
  EXPECT_EQ(builtin_class("two_regular_graphs").lambda(3), Rational(1, 6));
  EXPECT_EQ(builtin_class("two_regular_graphs").lambda(2), 0);
  EXPECT_EQ(builtin_class("mappings").lambda(2), Rational(3, 2));
}

TEST(BuiltinClass, UnknownNameListsAvailable) {
  try {
    builtin_class("trees");
    FAIL();
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    for (const auto& name : builtin_class_names()) EXPECT_NE(msg.find(name), std::string::npos);
  }
}

TEST(BuiltinClass, WeightsMatchClosedFormsUpTo50) {
  const auto perm = builtin_class("permutations");
  const auto map = builtin_class("mappings");
  const auto graphs = builtin_class("two_regular_graphs");
  const auto sets = builtin_class("set_partitions");
  const auto forests = builtin_class("forests");
  for (std::size_t j = 1; j <= 50; ++j) {
    const unsigned long jj = j;
    EXPECT_EQ(perm.lambda(j), Rational(1, jj));
    Rational sum;
    for (std::size_t k = 0; k < j; ++k) sum += power(Rational(jj), k) / Rational(factorial(k));
    EXPECT_EQ(map.lambda(j), sum / jj) << j;
    EXPECT_EQ(graphs.lambda(j), j >= 3 ? Rational(1, 2 * jj) : Rational(0));
    EXPECT_EQ(sets.lambda(j), Rational(1) / Rational(factorial(j)));
    const Rational tree = j == 1 ? Rational(1) : power(Rational(jj), j - 2);
    EXPECT_EQ(forests.lambda(j), tree / Rational(factorial(j))) << j;
  }
}

TEST(BuiltinClass, FloatWeightsAgreeWithExact) {
  for (const auto& name : builtin_class_names()) {
    const auto cls = builtin_class(name);
    for (std::size_t j = 1; j <= 120; ++j) {
      const Rational l = cls.lambda(j);
      if (l == 0) {
        EXPECT_TRUE(std::isinf(cls.log_lambda(j)));
        continue;
      }
      EXPECT_NEAR(cls.log_lambda(j), log_abs(l), 1e-12 * std::max(1.0, std::abs(log_abs(l))))
          << name << " j=" << j;
    }
  }
}

TEST(BuiltinClass, Radii) {
  EXPECT_TRUE(builtin_class("permutations").rho().is_exact());
  EXPECT_DOUBLE_EQ(builtin_class("mappings").rho().value(), std::exp(-1.0));
  EXPECT_DOUBLE_EQ(builtin_class("forests").rho().log(), -1.0);
  EXPECT_EQ(builtin_class("set_partitions").rho().exact_value(), 1);
}

TEST(Rho, Parsing) {
  EXPECT_EQ(Rho::parse("1/2").exact_value(), Rational(1, 2));
  EXPECT_DOUBLE_EQ(Rho::parse("1/e").log(), -1.0);
  EXPECT_DOUBLE_EQ(Rho::parse("e^-1").log(), -1.0);
  EXPECT_DOUBLE_EQ(Rho::parse("exp(-1/2)").log(), -0.5);
  EXPECT_TRUE(Rho::parse("exp(0)").is_exact());
  EXPECT_THROW(Rho::parse("0"), InvalidArgument);
  EXPECT_THROW(Rho::parse("-1"), InvalidArgument);
}

TEST(ClassConfig, ListMatchesPermutations) {
  ClassConfig cfg;
  cfg.name = "short";
  cfg.rho = "1";
  cfg.weights = std::vector<std::string>{"1", "1/2", "1/3"};
  const auto cls = class_from_config(cfg);
  const auto perm = builtin_class("permutations");
  for (std::size_t j = 1; j <= 3; ++j) EXPECT_EQ(cls.lambda(j), perm.lambda(j));
  EXPECT_EQ(cls.lambda(4), 0);
}

TEST(ClassConfig, Errors) {
  ClassConfig cfg;
  cfg.name = "bad";
  cfg.rho = "1";
  cfg.weights = std::vector<std::string>{"0", "0"};
  try {
    class_from_config(cfg);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("no positive weight"), std::string::npos);
  }
  cfg.weights = std::vector<std::string>{"1", "-1"};
  try {
    class_from_config(cfg);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("negative weight at j=2"), std::string::npos);
  }
  cfg.weights = std::vector<std::string>{};
  EXPECT_THROW(class_from_config(cfg), InvalidArgument);
  cfg.weights = std::vector<std::string>{"1"};
  cfg.rho.reset();
  try {
    class_from_config(cfg);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("missing rho"), std::string::npos);
  }
}

TEST(ClassConfig, FormulasFromJson) {
  const auto ewens = class_from_config(parse_class_config(
      R"({"name": "ewens2", "rho": "1", "formula": "ewens", "params": {"theta": "2"}})"));
  EXPECT_EQ(ewens.lambda(5), Rational(2, 5));
  const auto cycles = class_from_config(parse_class_config(
      R"({"name": "c", "rho": "1", "formula": {"kind": "cycles", "params": {"scale": "1/2", "min": "3"}}})"));
  const auto graphs = builtin_class("two_regular_graphs");
  for (std::size_t j = 1; j <= 20; ++j) EXPECT_EQ(cycles.lambda(j), graphs.lambda(j));
  const auto geo = class_from_config(parse_class_config(
      R"({"name": "g", "rho": "1/2", "formula": "geometric", "params": {"scale": "1", "ratio": "2"}})"));
  EXPECT_EQ(geo.lambda(3), Rational(8, 3));
  EXPECT_EQ(geo.rho().exact_value(), Rational(1, 2));
}

TEST(ClassConfig, ResolveFromFile) {
  const std::string path = ::testing::TempDir() + "/kubilius_class.json";
  {
    std::ofstream out(path);
    out << R"({"name": "listed", "rho": "1/e", "weights": ["1", "3/2", "17/6"]})";
  }
  const auto cls = resolve_class(path);
  EXPECT_EQ(cls.name(), "listed");
  EXPECT_EQ(cls.lambda(3), Rational(17, 6));
  EXPECT_DOUBLE_EQ(cls.rho().log(), -1.0);
  EXPECT_THROW(resolve_class("no_such_class_or_file"), InvalidArgument);
}

TEST(AssemblyClass, ScaledWeights) {
  const auto map = builtin_class("mappings");
  const auto w = map.scaled_lambdas(30);
  ASSERT_EQ(w.size(), 31u);
  EXPECT_EQ(w[0], 0.0);
  for (std::size_t j = 1; j <= 30; ++j)
    EXPECT_NEAR(w[j], to_double(map.lambda(j)) * std::exp(-static_cast<double>(j)), 1e-13 * w[j]);
}
