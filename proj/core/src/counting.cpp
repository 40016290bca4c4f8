#include "kubilius/counting.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "kubilius/errors.hpp"
#include "kubilius/parallel.hpp"
#include "summation.hpp"

namespace kubilius {
namespace {

std::vector<std::size_t> normalize_excluded(std::vector<std::size_t> excluded) {
  std::sort(excluded.begin(), excluded.end());
  if (std::adjacent_find(excluded.begin(), excluded.end()) != excluded.end())
    throw InvalidArgument("excluded component sizes must be distinct");
  if (!excluded.empty() && excluded.front() == 0)
    throw InvalidArgument("excluded component sizes must be at least 1");
  return excluded;
}

std::vector<bool> exclusion_mask(const std::vector<std::size_t>& excluded, std::size_t N) {
  std::vector<bool> mask(N + 1, false);
  for (std::size_t j : excluded)
    if (j <= N) mask[j] = true;
  return mask;
}

}  // namespace

// ---------------------------------------------------------------------------
// QTable

QTable QTable::exact(std::vector<Rational> values, std::vector<std::size_t> excluded) {
  QTable t;
  t.mode_ = Mode::exact;
  t.exact_ = std::move(values);
  t.excluded_ = std::move(excluded);
  return t;
}

QTable QTable::scaled(std::vector<double> values, Rho rho, std::vector<std::size_t> excluded) {
  QTable t;
  t.mode_ = Mode::scaled;
  t.scaled_ = std::move(values);
  t.rho_ = std::move(rho);
  t.excluded_ = std::move(excluded);
  return t;
}

std::size_t QTable::max_n() const noexcept {
  return (mode_ == Mode::exact ? exact_.size() : scaled_.size()) - 1;
}

Number QTable::value(std::size_t n) const {
  if (n > max_n()) throw InvalidArgument("table index " + std::to_string(n) + " out of range");
  if (mode_ == Mode::exact) return exact_[n];
  return scaled_[n];
}

bool QTable::is_zero(std::size_t n) const {
  return mode_ == Mode::exact ? exact_.at(n) == 0 : scaled_.at(n) == 0.0;
}

const std::vector<Rational>& QTable::exact_values() const {
  if (mode_ != Mode::exact) throw InvalidArgument("table is not exact");
  return exact_;
}

const std::vector<double>& QTable::scaled_values() const {
  if (mode_ != Mode::scaled) throw InvalidArgument("table is not scaled");
  return scaled_;
}

// ---------------------------------------------------------------------------
// Recurrences

namespace detail {

std::vector<Rational> q_recurrence(const std::vector<Rational>& weights, std::size_t N,
                                   const std::vector<std::size_t>& excluded) {
  const auto mask = exclusion_mask(excluded, N);
  std::vector<Rational> jw(N + 1);
  for (std::size_t j = 1; j <= N; ++j)
    if (!mask[j]) jw[j] = weights[j] * j;

  std::vector<Rational> q(N + 1);
  q[0] = 1;
  Rational acc;
  for (std::size_t n = 1; n <= N; ++n) {
    acc = 0;
    for (std::size_t j = 1; j <= n; ++j)
      if (jw[j] != 0 && q[n - j] != 0) acc += jw[j] * q[n - j];
    q[n] = acc / n;
  }
  return q;
}

std::vector<Rational> q_deflate(const std::vector<Rational>& q, const std::vector<Rational>& weights,
                                std::size_t N, std::size_t j) {
  std::vector<Rational> out(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(N + 1));
  if (j > N || weights[j] == 0) return out;
  std::vector<Rational> t{Rational(1)};  // lambda_j^k / k!
  for (std::size_t k = 1; j * k <= N; ++k) t.push_back(t.back() * weights[j] / k);
  for (std::size_t n = j; n <= N; ++n) {
    Rational s = q[n];
    for (std::size_t k = 1; j * k <= n; ++k)
      if (out[n - j * k] != 0) s -= t[k] * out[n - j * k];
    out[n] = std::move(s);
  }
  return out;
}

std::vector<double> q_recurrence(const std::vector<double>& weights, std::size_t N,
                                 const std::vector<std::size_t>& excluded) {
  const auto mask = exclusion_mask(excluded, N);
  std::vector<double> jw(N + 1, 0.0);
  for (std::size_t j = 1; j <= N; ++j)
    if (!mask[j]) jw[j] = weights[j] * static_cast<double>(j);

  std::vector<double> q(N + 1, 0.0);
  q[0] = 1.0;
  for (std::size_t n = 1; n <= N; ++n) {
    CompensatedSum acc;
    for (std::size_t j = 1; j <= n; ++j) acc.add(jw[j] * q[n - j]);
    q[n] = acc.value() / static_cast<double>(n);
    if (!std::isfinite(q[n]))
      throw NumericError("nonfinite value in scaled table at n=" + std::to_string(n), n);
  }
  return q;
}

}  // namespace detail

QTable q_table(const AssemblyClass& cls, std::size_t N, Mode mode) {
  return q_excl_table(cls, N, {}, mode);
}

QTable q_table_scaled(const AssemblyClass& cls, std::size_t N, const Rho& rho) {
  return QTable::scaled(detail::q_recurrence(cls.scaled_lambdas(N, rho), N, {}), rho, {});
}

QTable q_excl_table(const AssemblyClass& cls, std::size_t N, std::vector<std::size_t> excluded,
                    Mode mode) {
  excluded = normalize_excluded(std::move(excluded));
  if (mode == Mode::exact)
    return QTable::exact(detail::q_recurrence(cls.lambdas(N), N, excluded), excluded);
  return QTable::scaled(detail::q_recurrence(cls.scaled_lambdas(N), N, excluded), cls.rho(),
                        excluded);
}

Rational g_of_n(const AssemblyClass& cls, std::size_t n) {
  const QTable table = q_table(cls, n, Mode::exact);
  return Rational(table.exact_values()[n] * factorial(n));
}

// ---------------------------------------------------------------------------
// CountingEngine

CountingEngine::CountingEngine(AssemblyClass cls, unsigned threads)
    : class_(std::move(cls)), threads_(std::max(1u, threads)) {}

std::shared_ptr<const std::vector<Rational>> CountingEngine::exact_weights(std::size_t N) const {
  {
    std::lock_guard lock(mutex_);
    if (exact_weights_ && exact_weights_->size() > N) return exact_weights_;
  }
  auto weights = std::make_shared<const std::vector<Rational>>(class_.lambdas(N));
  std::lock_guard lock(mutex_);
  if (!exact_weights_ || exact_weights_->size() < weights->size()) exact_weights_ = weights;
  return exact_weights_;
}

std::shared_ptr<const std::vector<double>> CountingEngine::scaled_weights(std::size_t N) const {
  {
    std::lock_guard lock(mutex_);
    if (scaled_weights_ && scaled_weights_->size() > N) return scaled_weights_;
  }
  auto weights = std::make_shared<const std::vector<double>>(class_.scaled_lambdas(N));
  std::lock_guard lock(mutex_);
  if (!scaled_weights_ || scaled_weights_->size() < weights->size()) scaled_weights_ = weights;
  return scaled_weights_;
}

std::shared_ptr<const QTable> CountingEngine::lookup(const Key& key, std::size_t N) const {
  std::lock_guard lock(mutex_);
  const auto it = tables_.find(key);
  if (it != tables_.end() && it->second->max_n() >= N) return it->second;
  return nullptr;
}

void CountingEngine::store(const Key& key, std::shared_ptr<const QTable> table) const {
  std::lock_guard lock(mutex_);
  auto& slot = tables_[key];
  if (!slot || slot->max_n() < table->max_n()) slot = std::move(table);
}

std::shared_ptr<const QTable> CountingEngine::build(const Key& key, std::size_t N) const {
  const auto& [excluded, mode] = key;
  if (mode == Mode::exact && excluded.size() == 1) {
    const auto full = q(N, mode);
    return std::make_shared<const QTable>(QTable::exact(
        detail::q_deflate(full->exact_values(), *exact_weights(N), N, excluded[0]), excluded));
  }
  if (mode == Mode::exact)
    return std::make_shared<const QTable>(
        QTable::exact(detail::q_recurrence(*exact_weights(N), N, excluded), excluded));
  return std::make_shared<const QTable>(QTable::scaled(
      detail::q_recurrence(*scaled_weights(N), N, excluded), class_.rho(), excluded));
}

std::shared_ptr<const QTable> CountingEngine::q(std::size_t N, Mode mode) const {
  return q_excl({}, N, mode);
}

std::shared_ptr<const QTable> CountingEngine::q_excl(std::vector<std::size_t> excluded,
                                                     std::size_t N, Mode mode) const {
  const Key key{normalize_excluded(std::move(excluded)), mode};
  if (auto table = lookup(key, N)) return table;
  auto table = build(key, N);
  store(key, table);
  return table;
}

void CountingEngine::prepare_exclusions(std::size_t N, Mode mode) const {
  std::vector<std::size_t> missing;
  for (std::size_t j = 1; j <= N; ++j)
    if (!lookup(Key{{j}, mode}, N)) missing.push_back(j);
  if (missing.empty()) return;
  // Warm the shared caches once before fanning out.
  if (mode == Mode::exact)
    exact_weights(N);
  else
    scaled_weights(N);
  q(N, mode);
  std::vector<std::shared_ptr<const QTable>> built(missing.size());
  parallel_for(missing.size(), threads_, [&](std::size_t i) {
    built[i] = build(Key{{missing[i]}, mode}, N);
  });
  for (std::size_t i = 0; i < missing.size(); ++i) store(Key{{missing[i]}, mode}, built[i]);
}

}  // namespace kubilius
