#include "kubilius/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "kubilius/errors.hpp"
#include "kubilius/parallel.hpp"
#include "summation.hpp"

namespace kubilius {
namespace {

// Scalar-specific plumbing for the two modes. Exact mode works with lambda_j
// and Q(n); scaled mode with rho^j lambda_j and Q(n) rho^n, which gives the
// same ratios because every rho power cancels.
template <class T>
struct Arith;

template <>
struct Arith<Rational> {
  using Sum = Rational;
  static const std::vector<Rational>& values(const QTable& t) { return t.exact_values(); }
  static std::shared_ptr<const std::vector<Rational>> weights(const CountingEngine& e,
                                                               std::size_t N) {
    return e.exact_weights(N);
  }
  static Rational mark(const AdditiveFunction& h, std::size_t j, std::size_t k) {
    return h.exact(j, k);
  }
  static Rational coefficient(const AdditiveFunction& h, std::size_t j) {
    return h.coefficient_exact(j);
  }
  static void add(Sum& s, const Rational& x) {
    if (x != 0) s += x;
  }
  static Rational result(const Sum& s) { return s; }
  static Rational clamp_nonnegative(Rational x) { return x; }
  static constexpr Mode mode = Mode::exact;
};

template <>
struct Arith<double> {
  using Sum = detail::CompensatedSum;
  static const std::vector<double>& values(const QTable& t) { return t.scaled_values(); }
  static std::shared_ptr<const std::vector<double>> weights(const CountingEngine& e,
                                                             std::size_t N) {
    return e.scaled_weights(N);
  }
  static double mark(const AdditiveFunction& h, std::size_t j, std::size_t k) {
    return h.value(j, k);
  }
  static double coefficient(const AdditiveFunction& h, std::size_t j) { return h.coefficient(j); }
  static void add(Sum& s, double x) { s.add(x); }
  static double result(const Sum& s) { return s.value(); }
  static double clamp_nonnegative(double x) { return std::max(0.0, x); }
  static constexpr Mode mode = Mode::scaled;
};

// u^k / k! for k = 0..kmax.
template <class T>
std::vector<T> local_weights(const T& u, std::size_t kmax) {
  std::vector<T> t(kmax + 1);
  t[0] = T(1);
  for (std::size_t k = 1; k <= kmax; ++k) t[k] = t[k - 1] * u / T(static_cast<double>(k));
  return t;
}

template <>
std::vector<Rational> local_weights(const Rational& u, std::size_t kmax) {
  std::vector<Rational> t(kmax + 1);
  t[0] = 1;
  for (std::size_t k = 1; k <= kmax; ++k) t[k] = t[k - 1] * u / k;
  return t;
}

// Folds component size j, with weight u = lambda_j (or rho^j lambda_j) and
// marks h_j(k), into the accumulators.
template <class T>
void marked_step(MarkedSums<T>& out, std::size_t j, const T& u, const AdditiveFunction& h) {
  using A = Arith<T>;
  const std::size_t N = out.total.size() - 1;
  if (u == T(0) || j > N) return;
  auto& a0 = out.total;
  auto& a1 = out.first;
  auto& a2 = out.second;
  const std::size_t kmax = N / j;
  const std::vector<T> t = local_weights(u, kmax);
  std::vector<T> marks(kmax + 1, T(0));
  for (std::size_t k = 1; k <= kmax; ++k) marks[k] = A::mark(h, j, k);

  // Descending m keeps the lower entries at their pre-j values.
  for (std::size_t m = N; m >= j; --m) {
    typename A::Sum s0{}, s1{}, s2{};
    A::add(s0, a0[m]);
    A::add(s1, a1[m]);
    A::add(s2, a2[m]);
    for (std::size_t k = 1, r = m - j;; ++k, r -= j) {
      if (a0[r] != T(0)) {
        const T& hk = marks[k];
        A::add(s0, t[k] * a0[r]);
        if (hk == T(0)) {
          A::add(s1, t[k] * a1[r]);
          A::add(s2, t[k] * a2[r]);
        } else {
          A::add(s1, t[k] * (a1[r] + hk * a0[r]));
          A::add(s2, t[k] * (a2[r] + T(2) * hk * a1[r] + hk * hk * a0[r]));
        }
      }
      if (r < j) break;
    }
    a0[m] = A::result(s0);
    a1[m] = A::result(s1);
    a2[m] = A::result(s2);
    if (m == j) break;
  }
}

template <class T>
MarkedSums<T> empty_sums(std::size_t N) {
  MarkedSums<T> out{std::vector<T>(N + 1, T(0)), std::vector<T>(N + 1, T(0)),
                    std::vector<T>(N + 1, T(0))};
  out.total[0] = T(1);
  return out;
}

template <class T>
MarkedSums<T> marked_sums(const CountingEngine& engine, std::size_t N, const AdditiveFunction& h) {
  const auto weights = Arith<T>::weights(engine, N);
  MarkedSums<T> out = empty_sums<T>(N);
  for (std::size_t j = 1; j <= N; ++j) marked_step(out, j, (*weights)[j], h);
  return out;
}

// Partition-measure total of profiles of size x <= n using only sizes > t.
// Entries are mostly zero when t is large, so only nonzero terms are visited.
template <class T>
std::vector<T> tail_table(const std::vector<T>& weights, std::size_t t, std::size_t n) {
  using A = Arith<T>;
  std::vector<T> r(n + 1, T(0));
  std::vector<std::size_t> support{0};
  r[0] = T(1);
  for (std::size_t x = t + 1; x <= n; ++x) {
    typename A::Sum s{};
    for (std::size_t y : support) {
      if (x - y <= t) break;
      const std::size_t j = x - y;
      A::add(s, T(static_cast<double>(j)) * weights[j] * r[y]);
    }
    r[x] = A::result(s) / T(static_cast<double>(x));
    if (r[x] != T(0)) support.push_back(x);
  }
  return r;
}

template <>
std::vector<Rational> tail_table(const std::vector<Rational>& weights, std::size_t t, std::size_t n) {
  std::vector<Rational> r(n + 1);
  std::vector<std::size_t> support{0};
  r[0] = 1;
  for (std::size_t x = t + 1; x <= n; ++x) {
    Rational s;
    for (std::size_t y : support) {
      if (x - y <= t) break;
      const std::size_t j = x - y;
      if (weights[j] != 0) s += weights[j] * r[y] * static_cast<unsigned long>(j);
    }
    r[x] = s / static_cast<unsigned long>(x);
    if (r[x] != 0) support.push_back(x);
  }
  return r;
}

// (mean, variance) for every order of a cutoff family from one incremental
// sweep: the state after the marked sizes j <= cutoff(n) is combined with the
// unmarked profiles made of larger sizes.
template <class T>
std::vector<std::pair<T, T>> cutoff_moments(const CountingEngine& engine, const FunctionFamily& family,
                                            const std::vector<std::size_t>& orders) {
  const std::size_t N = orders.back();
  const auto weights = Arith<T>::weights(engine, N);
  std::vector<std::size_t> by_cutoff(orders.size());
  std::iota(by_cutoff.begin(), by_cutoff.end(), 0);
  std::stable_sort(by_cutoff.begin(), by_cutoff.end(), [&](std::size_t a, std::size_t b) {
    return family.cutoff(orders[a]) < family.cutoff(orders[b]);
  });

  std::vector<std::pair<T, T>> out(orders.size());
  MarkedSums<T> state = empty_sums<T>(N);
  std::size_t done = 0;  // sizes folded into the state
  for (std::size_t i : by_cutoff) {
    const std::size_t n = orders[i];
    const std::size_t t = std::min(family.cutoff(n), n);
    for (; done < t; ++done) marked_step(state, done + 1, (*weights)[done + 1], *family.base);
    const std::vector<T> tail = tail_table(*weights, t, n);
    typename Arith<T>::Sum s0{}, s1{}, s2{};
    for (std::size_t x = 0; x <= n; ++x) {
      if (tail[x] == T(0)) continue;
      Arith<T>::add(s0, tail[x] * state.total[n - x]);
      Arith<T>::add(s1, tail[x] * state.first[n - x]);
      Arith<T>::add(s2, tail[x] * state.second[n - x]);
    }
    const T total = Arith<T>::result(s0);
    const T mean = Arith<T>::result(s1) / total;
    const T second = Arith<T>::result(s2) / total;
    out[i] = {mean, Arith<T>::clamp_nonnegative(second - mean * mean)};
  }
  return out;
}

template <class T>
const std::vector<T>& nonempty_q(const CountingEngine& engine, std::size_t n,
                                 std::shared_ptr<const QTable>& holder) {
  holder = engine.q(n, Arith<T>::mode);
  const auto& q = Arith<T>::values(*holder);
  if (q[n] == T(0)) throw EmptySupportError(n);
  return q;
}

template <class T>
std::pair<T, T> mean_variance_from(const MarkedSums<T>& sums, std::size_t n) {
  const T mean = sums.first[n] / sums.total[n];
  const T second = sums.second[n] / sums.total[n];
  return {mean, Arith<T>::clamp_nonnegative(second - mean * mean)};
}

template <class T>
std::pair<T, T> mean_variance(const CountingEngine& engine, std::size_t n,
                              const AdditiveFunction& h) {
  std::shared_ptr<const QTable> holder;
  nonempty_q<T>(engine, n, holder);
  return mean_variance_from(marked_sums<T>(engine, n, h), n);
}

template <class T>
SpectrumPMF pmf(const CountingEngine& engine, std::size_t n, std::size_t j) {
  if (j < 1 || j > n)
    throw InvalidArgument("component size j=" + std::to_string(j) + " outside [1, " +
                          std::to_string(n) + "]");
  std::shared_ptr<const QTable> holder;
  const auto& q = nonempty_q<T>(engine, n, holder);
  const auto excl_holder = engine.q_excl({j}, n, Arith<T>::mode);
  const auto& qj = Arith<T>::values(*excl_holder);

  SpectrumPMF out;
  out.n = n;
  out.j = j;
  out.mode = Arith<T>::mode;
  out.p.reserve(n / j + 1);
  if constexpr (std::is_same_v<T, double>) {
    // Log space: lambda_j^k / k! can underflow while the probability does not.
    const auto& cls = engine.assembly_class();
    const double log_u = cls.log_lambda(j) + static_cast<double>(j) * cls.rho().log();
    const double log_q = std::log(q[n]);
    double log_t = 0.0;  // log(lambda_j^k / k!)
    for (std::size_t k = 0; k <= n / j; ++k) {
      if (k > 0) log_t += log_u - std::log(static_cast<double>(k));
      const double r = qj[n - j * k];
      const bool zero = r == 0.0 || (k > 0 && std::isinf(log_u));
      out.p.emplace_back(zero ? 0.0 : std::exp(log_t + std::log(r) - log_q));
    }
  } else {
    const auto weights = Arith<T>::weights(engine, n);
    const auto t = local_weights((*weights)[j], n / j);
    for (std::size_t k = 0; k <= n / j; ++k) out.p.emplace_back(T(t[k] * qj[n - j * k] / q[n]));
  }
  return out;
}

template <class T>
T rhs_general(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h) {
  using A = Arith<T>;
  std::shared_ptr<const QTable> holder;
  const auto& q = nonempty_q<T>(engine, n, holder);
  const auto weights = A::weights(engine, n);
  engine.prepare_exclusions(n, A::mode);
  typename A::Sum sum{};
  for (std::size_t j = 1; j <= n; ++j) {
    const T& u = (*weights)[j];
    if (u == T(0)) continue;
    const auto table = engine.q_excl({j}, n, A::mode);
    const auto& qj = A::values(*table);
    const auto t = local_weights(u, n / j);
    for (std::size_t k = 1; k <= n / j; ++k) {
      const T hk = A::mark(h, j, k);
      if (hk == T(0)) continue;
      A::add(sum, t[k] * hk * hk * qj[n - j * k]);
    }
  }
  return A::result(sum) / q[n];
}

template <class T>
T rhs_complete(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h) {
  using A = Arith<T>;
  if (!h.is_complete())
    throw InvalidArgument("additive function '" + h.name() + "' is not completely additive");
  std::shared_ptr<const QTable> holder;
  const auto& q = nonempty_q<T>(engine, n, holder);
  const auto weights = A::weights(engine, n);
  typename A::Sum sum{};
  for (std::size_t j = 1; j <= n; ++j) {
    const T& u = (*weights)[j];
    if (u == T(0)) continue;
    const T a = A::coefficient(h, j);
    if (a == T(0)) continue;
    A::add(sum, u * a * a * q[n - j]);
  }
  return A::result(sum) / q[n];
}

MomentReport assemble(std::size_t n, Number mean, Number variance, Number rhs1,
                      std::optional<Number> rhs2) {
  MomentReport r;
  r.n = n;
  r.mean = std::move(mean);
  r.variance = std::move(variance);
  r.rhs1 = std::move(rhs1);
  r.rhs2 = std::move(rhs2);
  // rhs1 = 0 forces every h_j(k) with positive mass to vanish.
  if (r.rhs1.is_zero()) {
    if (r.variance.is_exact() && !r.variance.is_zero())
      throw std::logic_error("nonzero variance with vanishing rhs1 at n=" + std::to_string(n));
  } else {
    r.ratio1 = divide(r.variance, r.rhs1);
  }
  if (r.rhs2 && !r.rhs2->is_zero()) r.ratio2 = divide(r.variance, *r.rhs2);
  return r;
}

template <class T>
MomentReport report_from(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                         const std::pair<T, T>& mv) {
  std::optional<Number> rhs2;
  if (h.is_complete()) rhs2 = Number(rhs_complete<T>(engine, n, h));
  return assemble(n, Number(mv.first), Number(mv.second), Number(rhs_general<T>(engine, n, h)),
                  std::move(rhs2));
}

void require_mode(const AdditiveFunction& h, Mode mode) {
  if (mode == Mode::exact && !h.rational_valued())
    throw InvalidArgument("additive function '" + h.name() +
                          "' is not rational-valued; use float mode");
}

}  // namespace

MarkedSums<Rational> marked_sums_exact(const CountingEngine& engine, std::size_t N,
                                       const AdditiveFunction& h) {
  require_mode(h, Mode::exact);
  return marked_sums<Rational>(engine, N, h);
}

MarkedSums<double> marked_sums_scaled(const CountingEngine& engine, std::size_t N,
                                      const AdditiveFunction& h) {
  return marked_sums<double>(engine, N, h);
}

SpectrumPMF comp_count_pmf(const CountingEngine& engine, std::size_t n, std::size_t j, Mode mode) {
  return mode == Mode::exact ? pmf<Rational>(engine, n, j) : pmf<double>(engine, n, j);
}

Number mean_additive(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                     Mode mode) {
  require_mode(h, mode);
  if (mode == Mode::exact) return mean_variance<Rational>(engine, n, h).first;
  return mean_variance<double>(engine, n, h).first;
}

Number variance_additive(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                         Mode mode) {
  require_mode(h, mode);
  if (mode == Mode::exact) return mean_variance<Rational>(engine, n, h).second;
  return mean_variance<double>(engine, n, h).second;
}

Number tk_rhs_general(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                      Mode mode) {
  require_mode(h, mode);
  if (mode == Mode::exact) return rhs_general<Rational>(engine, n, h);
  return rhs_general<double>(engine, n, h);
}

Number tk_rhs_complete(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                       Mode mode) {
  require_mode(h, mode);
  if (mode == Mode::exact) return rhs_complete<Rational>(engine, n, h);
  return rhs_complete<double>(engine, n, h);
}

MomentReport moment_report(const CountingEngine& engine, std::size_t n, const AdditiveFunction& h,
                           Mode mode) {
  require_mode(h, mode);
  if (mode == Mode::exact)
    return report_from<Rational>(engine, n, h, mean_variance<Rational>(engine, n, h));
  return report_from<double>(engine, n, h, mean_variance<double>(engine, n, h));
}

SweepResult tk_ratio_sweep(const CountingEngine& engine, const FunctionFamily& family,
                           std::size_t n_min, std::size_t n_max, Mode mode) {
  if (n_min < 1 || n_min > n_max)
    throw InvalidArgument("sweep range must satisfy 1 <= n_min <= n_max");
  if (mode == Mode::exact && !family.rational_valued)
    throw InvalidArgument("family '" + family.name + "' is not rational-valued; use float mode");

  const auto q = engine.q(n_max, mode);
  engine.prepare_exclusions(n_max, mode);

  std::vector<std::size_t> orders;
  SweepResult result;
  for (std::size_t n = n_min; n <= n_max; ++n)
    (q->is_zero(n) ? result.skipped : orders).push_back(n);

  std::vector<MomentReport> rows(orders.size());
  if (!family.depends_on_n) {
    const AdditiveFunction h = family.at(n_max);
    if (mode == Mode::exact) {
      const auto sums = marked_sums<Rational>(engine, n_max, h);
      parallel_for(orders.size(), engine.threads(), [&](std::size_t i) {
        rows[i] = report_from<Rational>(engine, orders[i], h, mean_variance_from(sums, orders[i]));
      });
    } else {
      const auto sums = marked_sums<double>(engine, n_max, h);
      parallel_for(orders.size(), engine.threads(), [&](std::size_t i) {
        rows[i] = report_from<double>(engine, orders[i], h, mean_variance_from(sums, orders[i]));
      });
    }
  } else if (family.cutoff && family.base && !orders.empty()) {
    if (mode == Mode::exact) {
      const auto mv = cutoff_moments<Rational>(engine, family, orders);
      parallel_for(orders.size(), engine.threads(), [&](std::size_t i) {
        rows[i] = report_from<Rational>(engine, orders[i], family.at(orders[i]), mv[i]);
      });
    } else {
      const auto mv = cutoff_moments<double>(engine, family, orders);
      parallel_for(orders.size(), engine.threads(), [&](std::size_t i) {
        rows[i] = report_from<double>(engine, orders[i], family.at(orders[i]), mv[i]);
      });
    }
  } else {
    parallel_for(orders.size(), engine.threads(), [&](std::size_t i) {
      rows[i] = moment_report(engine, orders[i], family.at(orders[i]), mode);
    });
  }

  for (const auto& row : rows) {
    if (row.ratio1 && (!result.sup_ratio1 || less(*result.sup_ratio1, *row.ratio1)))
      result.sup_ratio1 = row.ratio1;
    if (row.ratio2 && (!result.sup_ratio2 || less(*result.sup_ratio2, *row.ratio2)))
      result.sup_ratio2 = row.ratio2;
  }
  result.rows = std::move(rows);
  return result;
}

std::pair<Rational, Rational> moments_pairwise(const CountingEngine& engine, std::size_t n,
                                               const AdditiveFunction& h) {
  require_mode(h, Mode::exact);
  std::shared_ptr<const QTable> holder;
  const auto& q = nonempty_q<Rational>(engine, n, holder);
  const auto weights = engine.exact_weights(n);

  // Marked local weights t_j(k) h_j(k) for every size with positive weight.
  std::vector<std::vector<Rational>> marked(n + 1);
  for (std::size_t j = 1; j <= n; ++j) {
    if ((*weights)[j] == 0) continue;
    const auto t = local_weights((*weights)[j], n / j);
    marked[j].assign(n / j + 1, Rational(0));
    for (std::size_t k = 1; k <= n / j; ++k) marked[j][k] = t[k] * h.exact(j, k);
  }

  Rational first, second;
  for (std::size_t j = 1; j <= n; ++j) {
    if (marked[j].empty()) continue;
    const auto table = engine.q_excl({j}, n, Mode::exact);
    const auto& qj = table->exact_values();
    for (std::size_t k = 1; k <= n / j; ++k) {
      if (marked[j][k] == 0) continue;
      first += marked[j][k] * qj[n - j * k];
      second += marked[j][k] * h.exact(j, k) * qj[n - j * k];
    }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    if (marked[i].empty()) continue;
    for (std::size_t j = i + 1; i + j <= n; ++j) {
      if (marked[j].empty()) continue;
      const auto qij = detail::q_recurrence(*weights, n, {i, j});
      Rational cross;
      for (std::size_t k = 1; i * k + j <= n; ++k) {
        if (marked[i][k] == 0) continue;
        for (std::size_t m = 1; i * k + j * m <= n; ++m)
          if (marked[j][m] != 0) cross += marked[i][k] * marked[j][m] * qij[n - i * k - j * m];
      }
      second += 2 * cross;
    }
  }
  first /= q[n];
  second /= q[n];
  return {first, second};
}

}  // namespace kubilius
