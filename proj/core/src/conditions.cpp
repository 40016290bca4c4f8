#include "kubilius/conditions.hpp"

#include <cmath>
#include <string>

#include "kubilius/counting.hpp"
#include "kubilius/errors.hpp"
#include "summation.hpp"

namespace kubilius {
namespace {

// rho^j j lambda_j for j = 1..N, exact when rho is rational.
std::vector<Number> size_weights(const AssemblyClass& cls, const Rho& rho, std::size_t N) {
  std::vector<Number> out(N + 1, Number(0.0));
  if (rho.is_exact()) {
    const auto lambdas = cls.lambdas(N);
    Rational rho_power = 1;
    for (std::size_t j = 1; j <= N; ++j) {
      rho_power *= rho.exact_value();
      out[j] = Rational(rho_power * lambdas[j] * j);
    }
    out[0] = Rational(0);
  } else {
    const auto scaled = cls.scaled_lambdas(N, rho);
    for (std::size_t j = 1; j <= N; ++j) out[j] = scaled[j] * static_cast<double>(j);
  }
  return out;
}

// Partial sums S(n) = sum_{j<=n} rho^j j lambda_j.
std::vector<Number> partial_sums(const std::vector<Number>& weights) {
  std::vector<Number> out(weights.size());
  if (weights.size() > 1 && weights[1].is_exact()) {
    Rational s = 0;
    out[0] = s;
    for (std::size_t n = 1; n < weights.size(); ++n) {
      s += weights[n].exact();
      out[n] = s;
    }
  } else {
    detail::CompensatedSum s;
    out[0] = 0.0;
    for (std::size_t n = 1; n < weights.size(); ++n) {
      s.add(weights[n].to_double());
      out[n] = s.value();
    }
  }
  return out;
}

Number product(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return Rational(a.exact() * b.exact());
  return a.to_double() * b.to_double();
}

Number as_float_if(const Number& value, bool exact) {
  return exact ? value : Number(value.to_double());
}

// lhs >= rhs (exact) or lhs >= rhs (1 - tol).
bool at_least(const Number& lhs, const Number& rhs, bool exact) {
  if (exact) return !less(lhs, rhs);
  return lhs.to_double() >= rhs.to_double() * (1.0 - kConditionTolerance);
}

bool at_most(const Number& lhs, const Number& rhs, bool exact) {
  if (exact) return !less(rhs, lhs);
  return lhs.to_double() <= rhs.to_double() * (1.0 + kConditionTolerance);
}

// Compensated sums of lambda_j rho^j for n = 0..N.
std::vector<double> log_exponent_sums(const AssemblyClass& cls, const Rho& rho, std::size_t N) {
  const auto scaled = cls.scaled_lambdas(N, rho);
  std::vector<double> out(N + 1, 0.0);
  detail::CompensatedSum s;
  for (std::size_t n = 1; n <= N; ++n) {
    s.add(scaled[n]);
    out[n] = s.value();
  }
  return out;
}

struct QLowerRatios {
  std::vector<double> lhs;  // n q(n)
  std::vector<double> exponent;
  std::vector<std::size_t> skipped;
};

QLowerRatios q_lower_terms(const AssemblyClass& cls, const Rho& rho, std::size_t N) {
  const QTable q = q_table_scaled(cls, N, rho);
  QLowerRatios out;
  out.exponent = log_exponent_sums(cls, rho, N);
  out.lhs.assign(N + 1, 0.0);
  for (std::size_t n = 1; n <= N; ++n) {
    out.lhs[n] = static_cast<double>(n) * q.scaled_values()[n];
    if (q.scaled_values()[n] == 0.0) out.skipped.push_back(n);
  }
  return out;
}

ConstantFit fit_constants(const AssemblyClass& cls, const Rho& rho, std::size_t N) {
  const auto weights = size_weights(cls, rho, N);
  const auto sums = partial_sums(weights);
  const bool exact = rho.is_exact();

  ConstantFit fit;
  fit.params.rho = rho;

  Number theta_upper = weights[1];
  for (std::size_t j = 2; j <= N; ++j)
    if (less(theta_upper, weights[j])) theta_upper = weights[j];
  fit.params.Theta = theta_upper;

  // suffix_min[n] = min_{n <= m <= N} S(m)/m
  std::vector<Number> suffix_min(N + 2);
  for (std::size_t n = N; n >= 1; --n) {
    const Number ratio = exact ? Number(Rational(sums[n].exact() / n))
                               : Number(sums[n].to_double() / static_cast<double>(n));
    suffix_min[n] = (n == N || less(ratio, suffix_min[n + 1])) ? ratio : suffix_min[n + 1];
  }
  const std::size_t n0_max = std::max<std::size_t>(1, N / 2);
  std::size_t best_n0 = 1;
  for (std::size_t n0 = 2; n0 <= n0_max; ++n0)
    if (less(suffix_min[best_n0], suffix_min[n0])) best_n0 = n0;
  fit.params.theta = suffix_min[best_n0];
  fit.params.n0 = best_n0;

  const auto terms = q_lower_terms(cls, rho, N);
  double theta_prime = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    if (terms.lhs[n] == 0.0) continue;
    const double ratio = terms.lhs[n] / std::exp(terms.exponent[n]);
    if (!fit.theta_prime_defined || ratio < theta_prime) theta_prime = ratio;
    fit.theta_prime_defined = true;
  }
  fit.params.theta_prime = theta_prime;
  return fit;
}

}  // namespace

std::string_view to_string(ConditionId id) {
  switch (id) {
    case ConditionId::strong: return "strong";
    case ConditionId::upper: return "upper";
    case ConditionId::lower_sum: return "lower_sum";
    case ConditionId::q_lower: return "q_lower";
  }
  return "unknown";
}

ConditionId parse_condition(std::string_view text) {
  if (text == "strong" || text == "1") return ConditionId::strong;
  if (text == "upper" || text == "2") return ConditionId::upper;
  if (text == "lower_sum" || text == "3") return ConditionId::lower_sum;
  if (text == "q_lower" || text == "4") return ConditionId::q_lower;
  throw InvalidArgument("unknown condition '" + std::string(text) +
                        "' (expected strong, upper, lower_sum, q_lower)");
}

void validate(const WeaklyLogParams& params) {
  if (params.Theta.sign() <= 0) throw InvalidArgument("Theta must be positive");
  if (params.theta.sign() <= 0) throw InvalidArgument("theta must be positive");
  if (params.theta_prime.sign() <= 0) throw InvalidArgument("theta' must be positive");
  if (params.n0 < 1) throw InvalidArgument("n0 must be at least 1");
}

ConditionVerdict check_condition(const AssemblyClass& cls, const WeaklyLogParams& params,
                                 ConditionId condition, std::size_t N) {
  validate(params);
  if (N < 1) throw InvalidArgument("checked range N must be at least 1");
  if (condition == ConditionId::lower_sum && N < params.n0)
    throw InvalidArgument("checked range N=" + std::to_string(N) + " is below n0=" +
                          std::to_string(params.n0));

  ConditionVerdict v;
  v.condition = condition;
  v.checked_range = N;

  switch (condition) {
    case ConditionId::upper:
    case ConditionId::strong: {
      const auto weights = size_weights(cls, params.rho, N);
      v.exact_comparison = params.rho.is_exact() && params.Theta.is_exact() &&
                           (condition == ConditionId::upper || params.theta.is_exact());
      std::size_t argmax = 1, argmin = 1;
      for (std::size_t j = 2; j <= N; ++j) {
        if (less(weights[argmax], weights[j])) argmax = j;
        if (less(weights[j], weights[argmin])) argmin = j;
      }
      const Number Theta = as_float_if(params.Theta, v.exact_comparison);
      const bool upper_ok = at_most(weights[argmax], Theta, v.exact_comparison);
      ConditionWitness upper{argmax, weights[argmax], Theta, "upper"};
      if (condition == ConditionId::upper) {
        v.holds = upper_ok;
        v.witness = upper;
        break;
      }
      const Number theta = as_float_if(params.theta, v.exact_comparison);
      const bool lower_ok = at_least(weights[argmin], theta, v.exact_comparison);
      ConditionWitness lower{argmin, weights[argmin], theta, "lower"};
      v.holds = upper_ok && lower_ok;
      if (!lower_ok) {
        v.witness = lower;
      } else if (!upper_ok) {
        v.witness = upper;
      } else {
        // Tighter side: compare min/theta against Theta/max.
        const bool lower_tighter =
            less(product(weights[argmin], weights[argmax]), product(theta, Theta));
        v.witness = lower_tighter ? lower : upper;
      }
      break;
    }
    case ConditionId::lower_sum: {
      const auto sums = partial_sums(size_weights(cls, params.rho, N));
      v.exact_comparison = params.rho.is_exact() && params.theta.is_exact();
      const Number theta = as_float_if(params.theta, v.exact_comparison);
      const auto index = [&](std::size_t n) {
        return v.exact_comparison ? Number(Rational(n)) : Number(static_cast<double>(n));
      };
      // Minimize S(n) / (theta n), i.e. S(n)/n.
      std::size_t best = params.n0;
      for (std::size_t n = params.n0 + 1; n <= N; ++n)
        if (less(product(sums[n], index(best)), product(sums[best], index(n)))) best = n;
      const Number bound = product(theta, index(best));
      v.holds = at_least(sums[best], bound, v.exact_comparison);
      v.witness = ConditionWitness{best, sums[best], bound, ""};
      break;
    }
    case ConditionId::q_lower: {
      v.exact_comparison = false;
      const auto terms = q_lower_terms(cls, params.rho, N);
      v.skipped_orders = terms.skipped;
      const double theta_prime = params.theta_prime.to_double();
      std::optional<std::size_t> best;
      double best_ratio = 0.0;
      for (std::size_t n = 1; n <= N; ++n) {
        if (terms.lhs[n] == 0.0) continue;
        const double ratio = terms.lhs[n] / (theta_prime * std::exp(terms.exponent[n]));
        if (!best || ratio < best_ratio) {
          best = n;
          best_ratio = ratio;
        }
      }
      if (!best) {
        v.holds = false;
        v.witness = ConditionWitness{1, Number(0.0), Number(theta_prime), "empty support"};
        break;
      }
      const double rhs = theta_prime * std::exp(terms.exponent[*best]);
      v.holds = at_least(terms.lhs[*best], rhs, false);
      v.witness = ConditionWitness{*best, terms.lhs[*best], rhs, ""};
      break;
    }
  }
  v.tolerance = v.exact_comparison ? 0.0 : kConditionTolerance;
  return v;
}

ConstantSearch search_constants(const AssemblyClass& cls, const Rho& rho, std::size_t N) {
  if (N < 1) throw InvalidArgument("search range N must be at least 1");
  ConstantSearch search;
  search.full = fit_constants(cls, rho, N);
  search.half = fit_constants(cls, rho, std::max<std::size_t>(1, N / 2));

  const auto& full = search.full;
  const auto& half = search.half;
  const double theta = full.params.theta.to_double();
  const double theta_prime = full.params.theta_prime.to_double();
  if (!(theta > 0.0)) {
    search.degenerate = true;
    search.reason = "theta is not positive";
  } else if (!full.theta_prime_defined || !(theta_prime > 0.0) || !std::isfinite(theta_prime)) {
    search.degenerate = true;
    search.reason = "theta' is not positive";
  } else if (theta < 0.75 * half.params.theta.to_double()) {
    search.degenerate = true;
    search.reason = "theta decays when the range doubles (partial sums grow sublinearly)";
  } else if (theta_prime < 0.75 * half.params.theta_prime.to_double()) {
    search.degenerate = true;
    search.reason = "theta' decays when the range doubles";
  }
  return search;
}

std::optional<WeaklyLogParams> suggest_constants(const AssemblyClass& cls, const Rho& rho,
                                                 std::size_t N) {
  auto search = search_constants(cls, rho, N);
  if (search.degenerate) return std::nullopt;
  return std::move(search.full.params);
}

}  // namespace kubilius
