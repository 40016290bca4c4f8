#include <gtest/gtest.h>

#include <random>

#include "kubilius/errors.hpp"
#include "kubilius/moments.hpp"
#include "kubilius/oracle.hpp"
#include "support.hpp"

using namespace kubilius;
using kubilius::testing::harmonic;

namespace {

const AdditiveFunction kW = AdditiveFunction::complete("w", [](std::size_t) { return Rational(1); });
const AdditiveFunction kZero = AdditiveFunction::complete("zero", [](std::size_t) { return Rational(0); });

// A general array with small random rational entries, fixed by the seed.
AdditiveFunction random_general(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  std::vector<std::vector<Rational>> table(n + 1, std::vector<Rational>(n + 1));
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; j * k <= n; ++k) {
      table[j][k] = Rational(num(rng), den(rng));
      table[j][k].canonicalize();
    }
  return AdditiveFunction::general("random", [table](std::size_t j, std::size_t k) {
    return j < table.size() && k < table[j].size() ? table[j][k] : Rational(0);
  });
}

}  // namespace

TEST(Pmf, PermutationExamples) {
  const CountingEngine engine(builtin_class("permutations"));
  EXPECT_EQ(comp_count_pmf(engine, 3, 1, Mode::exact).p[1].exact(), Rational(1, 2));
  EXPECT_EQ(comp_count_pmf(engine, 3, 3, Mode::exact).p[1].exact(), Rational(1, 3));
}

TEST(Pmf, FullSizeComponent) {
  for (const auto& name : builtin_class_names()) {
    const CountingEngine engine(builtin_class(name));
    for (std::size_t n = 3; n <= 12; ++n) {
      const Rational q = engine.q(n, Mode::exact)->exact_values()[n];
      const auto pmf = comp_count_pmf(engine, n, n, Mode::exact);
      ASSERT_EQ(pmf.p.size(), 2u);
      EXPECT_EQ(pmf.p[1].exact(), engine.assembly_class().lambda(n) / q);
      EXPECT_EQ(pmf.p[0].exact(), 1 - engine.assembly_class().lambda(n) / q);
    }
  }
}

TEST(Pmf, EmptySupport) {
  const CountingEngine engine(builtin_class("two_regular_graphs"));
  EXPECT_THROW(comp_count_pmf(engine, 2, 1, Mode::exact), EmptySupportError);
  EXPECT_THROW(comp_count_pmf(engine, 1, 1, Mode::scaled), EmptySupportError);
}

TEST(Pmf, NormalizationAndConsistency) {
  for (const auto& name : builtin_class_names()) {
    const CountingEngine engine(builtin_class(name), 2);
    for (std::size_t n = 1; n <= 60; ++n) {
      if (engine.q(n, Mode::exact)->is_zero(n)) continue;
      Rational size_total;
      for (std::size_t j = 1; j <= n; ++j) {
        const auto pmf = comp_count_pmf(engine, n, j, Mode::exact);
        Rational total, mean;
        for (std::size_t k = 0; k < pmf.p.size(); ++k) {
          ASSERT_GE(pmf.p[k].exact(), 0);
          total += pmf.p[k].exact();
          mean += pmf.p[k].exact() * static_cast<unsigned long>(k);
        }
        ASSERT_EQ(total, 1) << name << " n=" << n << " j=" << j;
        size_total += mean * static_cast<unsigned long>(j);
      }
      ASSERT_EQ(size_total, static_cast<unsigned long>(n)) << name << " n=" << n;
    }
  }
}

TEST(Moments, PermutationExamples) {
  const CountingEngine engine(builtin_class("permutations"));
  EXPECT_EQ(mean_additive(engine, 3, kW, Mode::exact).exact(), Rational(11, 6));
  EXPECT_EQ(variance_additive(engine, 3, kW, Mode::exact).exact(), Rational(17, 36));
  EXPECT_EQ(tk_rhs_complete(engine, 3, kW, Mode::exact).exact(), Rational(11, 6));
  // sum_j E[k_j^2] over S_3: E k_1^2 = (9+1+1+1)/6 = 2, E k_2^2 = 1/2, E k_3^2 = 1/3.
  EXPECT_EQ(tk_rhs_general(engine, 3, kW, Mode::exact).exact(), Rational(17, 6));
}

TEST(Moments, ZeroFunction) {
  for (const auto& name : builtin_class_names()) {
    const CountingEngine engine(builtin_class(name));
    const auto r = moment_report(engine, 10, kZero, Mode::exact);
    EXPECT_EQ(r.mean.exact(), 0);
    EXPECT_EQ(r.variance.exact(), 0);
    EXPECT_EQ(r.rhs1.exact(), 0);
    EXPECT_FALSE(r.ratio1);
    EXPECT_FALSE(r.ratio2);
  }
}

TEST(Moments, SingleTopTerm) {
  const CountingEngine engine(builtin_class("mappings"));
  const std::size_t n = 9;
  const auto h = AdditiveFunction::general("top", [n](std::size_t j, std::size_t k) {
    return j == n && k == 1 ? Rational(5, 2) : Rational(0);
  });
  const Rational expected = Rational(5, 2) * engine.assembly_class().lambda(n) / engine.q(n, Mode::exact)->exact_values()[n];
  EXPECT_EQ(mean_additive(engine, n, h, Mode::exact).exact(), expected);
  const auto a = AdditiveFunction::complete("a_n", [n](std::size_t j) { return Rational(j == n ? 1 : 0); });
  EXPECT_EQ(tk_rhs_complete(engine, n, a, Mode::exact).exact(),
            engine.assembly_class().lambda(n) / engine.q(n, Mode::exact)->exact_values()[n]);
}

TEST(Moments, SingleCoordinateReducesToPmf) {
  const CountingEngine engine(builtin_class("forests"));
  const std::size_t n = 17;
  for (std::size_t j : {1, 2, 5}) {
    const auto h = builtin_family("single:" + std::to_string(j)).at(n);
    const auto pmf = comp_count_pmf(engine, n, j, Mode::exact);
    Rational m1, m2;
    for (std::size_t k = 0; k < pmf.p.size(); ++k) {
      m1 += pmf.p[k].exact() * static_cast<unsigned long>(k);
      m2 += pmf.p[k].exact() * static_cast<unsigned long>(k * k);
    }
    EXPECT_EQ(variance_additive(engine, n, h, Mode::exact).exact(), m2 - m1 * m1);
    EXPECT_EQ(tk_rhs_general(engine, n, h, Mode::exact).exact(), m2);
  }
}

TEST(Moments, SetPartitionsMatchesOracle) {
  const CountingEngine engine(builtin_class("set_partitions"));
  const auto [mean, var] = oracle_moments(engine.assembly_class(), 4, kW);
  EXPECT_EQ(mean_additive(engine, 4, kW, Mode::exact).exact(), mean);
  EXPECT_EQ(variance_additive(engine, 4, kW, Mode::exact).exact(), var);
}

TEST(Moments, MarkedTotalsReproduceQ) {
  for (const auto& name : builtin_class_names()) {
    const CountingEngine engine(builtin_class(name));
    const auto sums = marked_sums_exact(engine, 60, kW);
    EXPECT_EQ(sums.total, engine.q(60, Mode::exact)->exact_values()) << name;
  }
}

TEST(Moments, RouteAgreementRandomArrays) {
  for (const auto& name : builtin_class_names()) {
    const CountingEngine engine(builtin_class(name));
    for (std::size_t n = 3; n <= 40; n += 6) {
      if (engine.q(n, Mode::exact)->is_zero(n)) continue;
      const auto h = random_general(1000 + n, n);
      const auto sums = marked_sums_exact(engine, n, h);
      const Rational q = sums.total[n];
      const auto [first, second] = moments_pairwise(engine, n, h);
      EXPECT_EQ(sums.first[n] / q, first) << name << " n=" << n;
      EXPECT_EQ(sums.second[n] / q, second) << name << " n=" << n;
    }
  }
}

TEST(Moments, IdentityRhs1AsExpectedSquares) {
  for (const auto& name : builtin_class_names()) {
    const CountingEngine engine(builtin_class(name));
    const std::size_t n = 24;
    const auto h = random_general(7, n);
    Rational expected;
    for (std::size_t j = 1; j <= n; ++j) {
      const auto pmf = comp_count_pmf(engine, n, j, Mode::exact);
      for (std::size_t k = 1; k < pmf.p.size(); ++k) expected += h.exact(j, k) * h.exact(j, k) * pmf.p[k].exact();
    }
    EXPECT_EQ(tk_rhs_general(engine, n, h, Mode::exact).exact(), expected) << name;
  }
}

TEST(Moments, ScaleInvariance) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> num(-30, 30);
  const CountingEngine engine(builtin_class("mappings"));
  const std::size_t n = 20;
  const auto h = random_general(11, n);
  const auto base = moment_report(engine, n, h, Mode::exact);
  for (int trial = 0; trial < 5; ++trial) {
    const int top = num(rng);
    if (top == 0) continue;
    Rational c(top, 7);
    c.canonicalize();
    const auto scaled = moment_report(engine, n, h.scaled(c), Mode::exact);
    EXPECT_EQ(scaled.variance.exact(), c * c * base.variance.exact());
    EXPECT_EQ(scaled.rhs1.exact(), c * c * base.rhs1.exact());
    EXPECT_EQ(scaled.ratio1->exact(), base.ratio1->exact());
  }
  const auto a = builtin_family("rademacher", 5).at(n);
  const auto base2 = moment_report(engine, n, a, Mode::exact);
  const auto scaled2 = moment_report(engine, n, a.scaled(Rational(-3, 2)), Mode::exact);
  EXPECT_EQ(scaled2.rhs2->exact(), Rational(9, 4) * base2.rhs2->exact());
  EXPECT_EQ(scaled2.ratio2->exact(), base2.ratio2->exact());
}

TEST(Moments, PermutationClosedForms) {
  const CountingEngine engine(builtin_class("permutations"));
  const auto sweep = tk_ratio_sweep(engine, builtin_family("w"), 1, 100, Mode::exact);
  ASSERT_EQ(sweep.rows.size(), 100u);
  Rational previous = -1;
  for (const auto& r : sweep.rows) {
    const Rational H = harmonic(r.n), H2 = harmonic(r.n, 2);
    EXPECT_EQ(r.mean.exact(), H);
    EXPECT_EQ(r.variance.exact(), H - H2);
    EXPECT_EQ(r.rhs2->exact(), H);
    EXPECT_LT(r.ratio2->exact(), 1);
    EXPECT_GE(r.ratio2->exact(), previous);
    previous = r.ratio2->exact();
  }
}

TEST(Sweep, ZeroFamilyAndSkips) {
  const CountingEngine engine(builtin_class("two_regular_graphs"));
  const auto zero = tk_ratio_sweep(engine, builtin_family("zero"), 1, 30, Mode::exact);
  EXPECT_EQ(zero.skipped, (std::vector<std::size_t>{1, 2}));
  for (const auto& r : zero.rows) {
    EXPECT_EQ(r.variance.exact(), 0);
    EXPECT_FALSE(r.ratio1);
  }
  EXPECT_FALSE(zero.sup_ratio1);
}

TEST(Sweep, TwoRegularGraphsAgainstOracle) {
  const CountingEngine engine(builtin_class("two_regular_graphs"));
  const auto sweep = tk_ratio_sweep(engine, builtin_family("w"), 3, 60, Mode::exact);
  ASSERT_TRUE(sweep.sup_ratio1);
  for (const auto& r : sweep.rows) {
    ASSERT_TRUE(r.ratio1);
    if (r.n > 30) continue;
    const auto [mean, var] = oracle_moments(engine.assembly_class(), r.n, kW);
    EXPECT_EQ(r.mean.exact(), mean);
    EXPECT_EQ(r.variance.exact(), var);
  }
}

TEST(Sweep, DependsOnNFamilyAndThreads) {
  const CountingEngine one(builtin_class("mappings"), 1);
  const CountingEngine four(builtin_class("mappings"), 4);
  const auto a = tk_ratio_sweep(one, builtin_family("half"), 1, 40, Mode::exact);
  const auto b = tk_ratio_sweep(four, builtin_family("half"), 1, 40, Mode::exact);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].variance, b.rows[i].variance);
    EXPECT_EQ(a.rows[i].rhs1, b.rows[i].rhs1);
    const auto h = builtin_family("half").at(a.rows[i].n);
    EXPECT_EQ(a.rows[i].variance.exact(), variance_additive(one, a.rows[i].n, h, Mode::exact).exact());
  }
}

TEST(Moments, ScaledAgreesWithExact) {
  for (const auto& name : builtin_class_names()) {
    const CountingEngine engine(builtin_class(name));
    for (const char* fam : {"w", "distinct", "rademacher"}) {
      const auto family = builtin_family(fam, 3);
      for (std::size_t n : {5, 50, 150}) {
        const auto h = family.at(n);
        const auto e = moment_report(engine, n, h, Mode::exact);
        const auto f = moment_report(engine, n, h, Mode::scaled);
        EXPECT_LE(relative_error(f.mean.to_double(), e.mean.to_double()), 1e-9) << name << fam << n;
        EXPECT_LE(relative_error(f.variance.to_double(), e.variance.to_double()), 1e-9) << name << fam << n;
        EXPECT_LE(relative_error(f.rhs1.to_double(), e.rhs1.to_double()), 1e-9) << name << fam << n;
      }
    }
  }
}

TEST(AdditiveFunction, Families) {
  const auto w = builtin_family("w").at(10);
  EXPECT_TRUE(w.is_complete());
  EXPECT_EQ(w.exact(3, 4), 4);
  EXPECT_EQ(w.exact(3, 0), 0);
  const auto half = builtin_family("half").at(10);
  EXPECT_EQ(half.coefficient_exact(5), 1);
  EXPECT_EQ(half.coefficient_exact(6), 0);
  const auto distinct = builtin_family("distinct").at(10);
  EXPECT_FALSE(distinct.is_complete());
  EXPECT_EQ(distinct.exact(2, 3), 1);
  const auto log = builtin_family("log").at(10);
  EXPECT_FALSE(log.rational_valued());
  EXPECT_DOUBLE_EQ(log.value(4, 2), 2 * std::log(4.0));
  const auto r1 = builtin_family("rademacher", 42).at(10);
  const auto r2 = builtin_family("rademacher", 42).at(99);
  for (std::size_t j = 1; j <= 10; ++j) {
    EXPECT_EQ(r1.coefficient_exact(j), r2.coefficient_exact(j));
    EXPECT_EQ(abs(r1.coefficient_exact(j)), 1);
    EXPECT_EQ(r1.exact(j, 3), 3 * r1.coefficient_exact(j));
  }
  EXPECT_THROW(builtin_family("cubic"), InvalidArgument);
}
