#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "kubilius/assembly_class.hpp"
#include "kubilius/number.hpp"

namespace kubilius {

// q(0..N): Q(n) in exact mode, Q(n)·rho^n in scaled mode, optionally with
// some component sizes excluded (Q^{j}, Q^{i,j}).
class QTable {
 public:
  static QTable exact(std::vector<Rational> values, std::vector<std::size_t> excluded);
  static QTable scaled(std::vector<double> values, Rho rho, std::vector<std::size_t> excluded);

  Mode mode() const noexcept { return mode_; }
  std::size_t max_n() const noexcept;
  Number value(std::size_t n) const;
  bool is_zero(std::size_t n) const;

  const std::vector<Rational>& exact_values() const;
  const std::vector<double>& scaled_values() const;
  const std::vector<std::size_t>& excluded() const noexcept { return excluded_; }
  const std::optional<Rho>& rho() const noexcept { return rho_; }

 private:
  Mode mode_ = Mode::exact;
  std::vector<Rational> exact_;
  std::vector<double> scaled_;
  std::optional<Rho> rho_;
  std::vector<std::size_t> excluded_;
};

// n q(n) = sum_{j<=n} j w_j q(n-j) with q(0) = 1, where w_j = lambda_j
// (exact) or rho^j lambda_j (scaled). Scaled sums are compensated and run in
// increasing j. Throws NumericError on a nonfinite scaled entry.
QTable q_table(const AssemblyClass& cls, std::size_t N, Mode mode);
QTable q_table_scaled(const AssemblyClass& cls, std::size_t N, const Rho& rho);

// Same recurrence with the terms of the excluded sizes removed.
QTable q_excl_table(const AssemblyClass& cls, std::size_t N, std::vector<std::size_t> excluded,
                    Mode mode);

// n! Q(n), the number of assemblies of order n.
Rational g_of_n(const AssemblyClass& cls, std::size_t n);

namespace detail {
std::vector<Rational> q_recurrence(const std::vector<Rational>& weights, std::size_t N,
                                   const std::vector<std::size_t>& excluded);
std::vector<double> q_recurrence(const std::vector<double>& weights, std::size_t N,
                                 const std::vector<std::size_t>& excluded);
// Q^{j} from Q by inverting Q(n) = sum_k (lambda_j^k / k!) Q^{j}(n - jk).
std::vector<Rational> q_deflate(const std::vector<Rational>& q, const std::vector<Rational>& weights,
                                std::size_t N, std::size_t j);
}  // namespace detail

// A class together with a cache of its tables, keyed by (excluded set, mode).
// A cached table built for N' >= N serves requests for N. Safe for concurrent use.
class CountingEngine {
 public:
  explicit CountingEngine(AssemblyClass cls, unsigned threads = 1);

  const AssemblyClass& assembly_class() const noexcept { return class_; }
  unsigned threads() const noexcept { return threads_; }

  std::shared_ptr<const QTable> q(std::size_t N, Mode mode) const;
  std::shared_ptr<const QTable> q_excl(std::vector<std::size_t> excluded, std::size_t N,
                                       Mode mode) const;

  // Builds {Q^{j} : 1 <= j <= N} in parallel over j.
  void prepare_exclusions(std::size_t N, Mode mode) const;

  // lambda_j (exact) and rho^j lambda_j (scaled) for j <= N, cached.
  std::shared_ptr<const std::vector<Rational>> exact_weights(std::size_t N) const;
  std::shared_ptr<const std::vector<double>> scaled_weights(std::size_t N) const;

 private:
  using Key = std::pair<std::vector<std::size_t>, Mode>;
  std::shared_ptr<const QTable> lookup(const Key& key, std::size_t N) const;
  void store(const Key& key, std::shared_ptr<const QTable> table) const;
  std::shared_ptr<const QTable> build(const Key& key, std::size_t N) const;

  AssemblyClass class_;
  unsigned threads_;
  mutable std::mutex mutex_;
  mutable std::map<Key, std::shared_ptr<const QTable>> tables_;
  mutable std::shared_ptr<const std::vector<Rational>> exact_weights_;
  mutable std::shared_ptr<const std::vector<double>> scaled_weights_;
};

}  // namespace kubilius
