#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kubilius/additive.hpp"
#include "kubilius/counting.hpp"
#include "kubilius/number.hpp"

namespace kubilius {

// Marginal law of k_j, the number of size-j components, at order n.
struct SpectrumPMF {
  std::size_t n = 0;
  std::size_t j = 0;
  Mode mode = Mode::exact;
  std::vector<Number> p;  // p[k] for 0 <= k <= n / j
};

struct MomentReport {
  std::size_t n = 0;
  Number mean;
  Number variance;
  Number rhs1;
  std::optional<Number> rhs2;
  std::optional<Number> ratio1;
  std::optional<Number> ratio2;
};

// P(k_j = k) = (lambda_j^k / k!) Q^{j}(n - jk) / Q(n).
// Throws EmptySupportError when Q(n) = 0.
SpectrumPMF comp_count_pmf(const CountingEngine& engine, std::size_t n, std::size_t j, Mode mode);

Number mean_additive(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                     Mode mode);
Number variance_additive(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                         Mode mode);

// sum_{jk<=n} (lambda_j^k h_j(k)^2 / k!) Q^{j}(n-jk) / Q(n).
Number tk_rhs_general(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                      Mode mode);
// sum_{j<=n} lambda_j a_j^2 Q(n-j) / Q(n); h must be completely additive.
Number tk_rhs_complete(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                       Mode mode);

MomentReport moment_report(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                           Mode mode);

struct SweepResult {
  std::vector<MomentReport> rows;        // increasing n
  std::vector<std::size_t> skipped;      // orders with Q(n) = 0
  std::optional<Number> sup_ratio1;
  std::optional<Number> sup_ratio2;
};

SweepResult tk_ratio_sweep(const CountingEngine& engine, const FunctionFamily& family,
                           std::size_t n_min, std::size_t n_max, Mode mode);

// Partition-measure totals of 1, H and H^2 over profiles of every size m <= N,
// built by one pass over component sizes j with local weights lambda_j^k/k!
// and marks h_j(k). total[m] reproduces q(m).
template <class T>
struct MarkedSums {
  std::vector<T> total;
  std::vector<T> first;
  std::vector<T> second;
};

MarkedSums<Rational> marked_sums_exact(const CountingEngine& engine, std::size_t N,
                                       const AdditiveFunction& h);
MarkedSums<double> marked_sums_scaled(const CountingEngine& engine, std::size_t N,
                                      const AdditiveFunction& h);

// (E h, E h^2) from the pairwise expansion over Q^{i,j} tables; exact mode,
// intended for small n.
std::pair<Rational, Rational> moments_pairwise(const CountingEngine& engine, std::size_t n,
                                               const AdditiveFunction& h);

}  // namespace kubilius
