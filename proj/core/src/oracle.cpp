#include "kubilius/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kubilius/errors.hpp"

namespace kubilius {

std::size_t Profile::order() const {
  std::size_t total = 0;
  for (std::size_t j = 1; j < s.size(); ++j) total += j * s[j];
  return total;
}

std::size_t Profile::components() const {
  return s.empty() ? 0 : std::accumulate(s.begin() + 1, s.end(), std::size_t{0});
}

ProfileEnumerator::ProfileEnumerator(std::size_t n, std::size_t cap) : n_(n) {
  if (n > cap)
    throw InvalidArgument("profile enumeration capped at n=" + std::to_string(cap) + ", got " +
                          std::to_string(n));
  profile_.s.assign(n + 1, 0);
}

bool ProfileEnumerator::next() {
  if (done_) return false;
  auto& s = profile_.s;
  if (!started_) {
    started_ = true;
    if (n_ > 0) {
      parts_.push_back(n_);
      s[n_] = 1;
    }
    return true;
  }
  // Rightmost part larger than 1.
  std::size_t ones = 0;
  while (!parts_.empty() && parts_.back() == 1) {
    parts_.pop_back();
    ++ones;
  }
  if (parts_.empty()) {
    done_ = true;
    return false;
  }
  s[1] -= ones;
  const std::size_t v = parts_.back() - 1;
  --s[parts_.back()];
  parts_.back() = v;
  ++s[v];
  std::size_t remaining = ones + 1;
  while (remaining >= v) {
    parts_.push_back(v);
    ++s[v];
    remaining -= v;
  }
  if (remaining > 0) {
    parts_.push_back(remaining);
    ++s[remaining];
  }
  return true;
}

void for_each_profile(std::size_t n, const std::function<void(const Profile&)>& visit) {
  ProfileEnumerator e(n);
  while (e.next()) visit(e.profile());
}

Rational profile_weight(const std::vector<Rational>& lambdas, const Profile& profile) {
  Rational w = 1;
  for (std::size_t j = 1; j < profile.s.size(); ++j) {
    const std::size_t sj = profile.s[j];
    if (sj == 0) continue;
    w *= power(lambdas.at(j), sj) / factorial(sj);
    if (w == 0) break;
  }
  return w;
}

namespace {

// lambda_j^s / s! for s <= n / j.
std::vector<std::vector<Rational>> power_table(const std::vector<Rational>& lambdas,
                                               std::size_t n) {
  std::vector<std::vector<Rational>> table(n + 1);
  for (std::size_t j = 1; j <= n; ++j) {
    table[j].resize(n / j + 1);
    table[j][0] = 1;
    for (std::size_t s = 1; s <= n / j; ++s) table[j][s] = table[j][s - 1] * lambdas[j] / s;
  }
  return table;
}

}  // namespace

OracleSummary oracle_summary(const AssemblyClass& cls, std::size_t n,
                             std::span<const AdditiveFunction> functions) {
  const auto lambdas = cls.lambdas(n);
  const auto powers = power_table(lambdas, n);

  // Mark tables h_j(k) per function.
  std::vector<std::vector<std::vector<Rational>>> marks(functions.size());
  for (std::size_t f = 0; f < functions.size(); ++f) {
    marks[f].resize(n + 1);
    for (std::size_t j = 1; j <= n; ++j) {
      marks[f][j].resize(n / j + 1);
      for (std::size_t k = 1; k <= n / j; ++k) marks[f][j][k] = functions[f].exact(j, k);
    }
  }

  OracleSummary out;
  out.pmf.resize(n + 1);
  for (std::size_t j = 1; j <= n; ++j) out.pmf[j].assign(n / j + 1, Rational(0));
  std::vector<Rational> sum_h(functions.size()), sum_h2(functions.size()),
      sum_sq(functions.size());

  ProfileEnumerator e(n);
  Rational w, value, squares;
  while (e.next()) {
    const auto& s = e.profile().s;
    w = 1;
    for (std::size_t j = 1; j <= n && w != 0; ++j)
      if (s[j] != 0) w *= powers[j][s[j]];
    if (w == 0) continue;
    out.q += w;
    for (std::size_t j = 1; j <= n; ++j)
      if (s[j] != 0) out.pmf[j][s[j]] += w;
    for (std::size_t f = 0; f < functions.size(); ++f) {
      value = 0;
      squares = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (s[j] == 0) continue;
        const Rational& m = marks[f][j][s[j]];
        value += m;
        squares += m * m;
      }
      sum_h[f] += w * value;
      sum_h2[f] += w * value * value;
      sum_sq[f] += w * squares;
    }
  }

  if (out.q == 0) {
    for (std::size_t j = 1; j <= n; ++j) out.pmf[j].clear();
    return out;
  }
  for (std::size_t j = 1; j <= n; ++j) {
    // Mass with s_j = 0 is the complement of the profiles counted above.
    Rational rest = out.q;
    for (std::size_t k = 1; k < out.pmf[j].size(); ++k) rest -= out.pmf[j][k];
    out.pmf[j][0] = rest;
    for (auto& p : out.pmf[j]) p /= out.q;
  }
  for (std::size_t f = 0; f < functions.size(); ++f) {
    const Rational mean = sum_h[f] / out.q;
    const Rational second = sum_h2[f] / out.q;
    out.moments.emplace_back(mean, second - mean * mean);
    out.rhs1.push_back(sum_sq[f] / out.q);
  }
  return out;
}

Rational oracle_q(const AssemblyClass& cls, std::size_t n) {
  const auto lambdas = cls.lambdas(n);
  Rational total;
  for_each_profile(n, [&](const Profile& p) { total += profile_weight(lambdas, p); });
  return total;
}

SpectrumPMF oracle_pmf(const AssemblyClass& cls, std::size_t n, std::size_t j) {
  if (j < 1 || j > n) throw InvalidArgument("component size out of range");
  const auto summary = oracle_summary(cls, n, {});
  if (summary.q == 0) throw EmptySupportError(n);
  SpectrumPMF out;
  out.n = n;
  out.j = j;
  out.mode = Mode::exact;
  for (const auto& p : summary.pmf[j]) out.p.emplace_back(p);
  return out;
}

std::pair<Rational, Rational> oracle_moments(const AssemblyClass& cls, std::size_t n,
                                             const AdditiveFunction& h) {
  const auto summary = oracle_summary(cls, n, std::span<const AdditiveFunction>(&h, 1));
  if (summary.q == 0) throw EmptySupportError(n);
  return summary.moments.front();
}

std::pair<Rational, Rational> structure_oracle_permutations(std::size_t n,
                                                            const AdditiveFunction& h) {
  if (n > kPermutationOracleCap)
    throw InvalidArgument("permutation enumeration capped at n=" +
                          std::to_string(kPermutationOracleCap));
  if (n == 0) return {Rational(0), Rational(0)};

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> cycles(n + 1);
  std::vector<bool> seen(n);
  Rational total_h, total_h2;
  std::size_t count = 0;
  do {
    std::fill(cycles.begin(), cycles.end(), 0);
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t start = 0; start < n; ++start) {
      if (seen[start]) continue;
      std::size_t length = 0;
      for (std::size_t x = start; !seen[x]; x = perm[x]) {
        seen[x] = true;
        ++length;
      }
      ++cycles[length];
    }
    Rational value;
    for (std::size_t j = 1; j <= n; ++j)
      if (cycles[j] != 0) value += h.exact(j, cycles[j]);
    total_h += value;
    total_h2 += value * value;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));

  const Rational mean = total_h / count;
  return {mean, Rational(total_h2 / count - mean * mean)};
}

}  // namespace kubilius
