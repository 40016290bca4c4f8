#include "kubilius/assembly_class.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include "kubilius/errors.hpp"

namespace kubilius {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double dlog(std::size_t j) { return std::log(static_cast<double>(j)); }

}  // namespace

// ---------------------------------------------------------------------------
// Rho

Rho::Rho() : exact_(Rational(1)), value_(1.0), log_(0.0), text_("1") {}

Rho Rho::exact(const Rational& value) {
  if (value <= 0) throw InvalidArgument("rho must be positive");
  Rho rho;
  rho.exact_ = value;
  rho.value_ = to_double(value);
  rho.log_ = log_abs(value);
  rho.text_ = to_string(value);
  return rho;
}

Rho Rho::exp_of(const Rational& exponent) {
  if (exponent == 0) return exact(Rational(1));
  Rho rho;
  rho.exact_.reset();
  rho.log_ = to_double(exponent);
  rho.value_ = std::exp(rho.log_);
  rho.text_ = "exp(" + to_string(exponent) + ")";
  return rho;
}

Rho Rho::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "1/e" || s == "e^-1") return exp_of(Rational(-1));
  if (s.starts_with("exp(") && s.ends_with(")")) return exp_of(parse_rational(s.substr(4, s.size() - 5)));
  return exact(parse_rational(s));
}

const Rational& Rho::exact_value() const {
  if (!exact_) throw InvalidArgument("rho " + text_ + " is not rational");
  return *exact_;
}

// ---------------------------------------------------------------------------
// AssemblyClass

struct AssemblyClass::Cache {
  std::mutex mutex;
  std::vector<Rational> lambdas{Rational(0)};
};

AssemblyClass::AssemblyClass(std::string name, std::string description, std::string formula,
                             Rho rho, ExactWeight lambda, LogWeight log_lambda)
    : name_(std::move(name)),
      description_(std::move(description)),
      formula_(std::move(formula)),
      rho_(std::move(rho)),
      lambda_(std::move(lambda)),
      log_lambda_(std::move(log_lambda)),
      cache_(std::make_shared<Cache>()) {
  if (!lambda_) throw InvalidArgument("class '" + name_ + "' has no weight function");
}

Rational AssemblyClass::lambda(std::size_t j) const {
  if (j == 0) throw InvalidArgument("component sizes start at 1");
  std::lock_guard lock(cache_->mutex);
  auto& values = cache_->lambdas;
  while (values.size() <= j) values.push_back(lambda_(values.size()));
  return values[j];
}

std::vector<Rational> AssemblyClass::lambdas(std::size_t n) const {
  if (n > 0) lambda(n);
  std::lock_guard lock(cache_->mutex);
  return {cache_->lambdas.begin(), cache_->lambdas.begin() + static_cast<std::ptrdiff_t>(n + 1)};
}

double AssemblyClass::log_lambda(std::size_t j) const {
  if (log_lambda_) return log_lambda_(j);
  const Rational value = lambda(j);
  return value == 0 ? kNegInf : log_abs(value);
}

double AssemblyClass::lambda_float(std::size_t j) const { return std::exp(log_lambda(j)); }

std::vector<double> AssemblyClass::scaled_lambdas(std::size_t n, const Rho& rho) const {
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const double l = log_lambda(j);
    if (l == kNegInf) continue;
    out[j] = std::exp(l + static_cast<double>(j) * rho.log());
  }
  return out;
}

AssemblyClass AssemblyClass::with_rho(Rho rho) const {
  AssemblyClass copy = *this;
  copy.rho_ = std::move(rho);
  return copy;
}

// ---------------------------------------------------------------------------
// Built-in classes

std::vector<std::string> builtin_class_names() {
  return {"permutations", "mappings", "two_regular_graphs", "set_partitions", "forests"};
}

AssemblyClass builtin_class(std::string_view name) {
  if (name == "permutations") {
    return AssemblyClass(
        "permutations", "permutations of an n-set; components are cycles", "lambda_j = 1/j",
        Rho(), [](std::size_t j) { return Rational(1, j); },
        [](std::size_t j) { return -dlog(j); });
  }
  if (name == "mappings") {
    return AssemblyClass(
        "mappings", "maps of an n-set into itself; components are connected functional graphs",
        "lambda_j = (1/j) sum_{k<j} j^k/k!", Rho::exp_of(Rational(-1)),
        [](std::size_t j) {
          // g_j = sum_{k<j} j^k (j-1)!/k!, accumulated downward from k = j-1.
          Integer term;
          mpz_ui_pow_ui(term.get_mpz_t(), j, j - 1);
          Integer g = term;
          for (std::size_t k = j - 1; k >= 1; --k) {
            term *= k;
            term /= static_cast<unsigned long>(j);
            g += term;
          }
          Rational r(g, factorial(j));
          r.canonicalize();
          return r;
        },
        [](std::size_t j) {
          // e^{-j} sum_{k<j} j^k/k! = Q(j, j), the regularized upper gamma.
          const double q = boost::math::gamma_q(static_cast<double>(j), static_cast<double>(j));
          return std::log(q) + static_cast<double>(j) - dlog(j);
        });
  }
  if (name == "two_regular_graphs") {
    return AssemblyClass(
        "two_regular_graphs", "2-regular labeled graphs; components are cycles of length >= 3",
        "lambda_j = 1/(2j) for j >= 3, else 0", Rho(),
        [](std::size_t j) { return j >= 3 ? Rational(1, 2 * j) : Rational(0); },
        [](std::size_t j) { return j >= 3 ? -dlog(2 * j) : kNegInf; });
  }
  if (name == "set_partitions") {
    return AssemblyClass(
        "set_partitions", "partitions of an n-set into blocks (rho is nominal)",
        "lambda_j = 1/j!", Rho(), [](std::size_t j) { return Rational(Integer(1), factorial(j)); },
        [](std::size_t j) { return -std::lgamma(static_cast<double>(j) + 1.0); });
  }
  if (name == "forests") {
    return AssemblyClass(
        "forests", "forests of unrooted labeled trees", "lambda_j = j^{j-2}/j!",
        Rho::exp_of(Rational(-1)),
        [](std::size_t j) {
          Integer num;
          mpz_ui_pow_ui(num.get_mpz_t(), j, j - 1);
          Rational r(num, factorial(j) * static_cast<unsigned long>(j));
          r.canonicalize();
          return r;
        },
        [](std::size_t j) {
          return (static_cast<double>(j) - 2.0) * dlog(j) -
                 std::lgamma(static_cast<double>(j) + 1.0);
        });
  }
  std::ostringstream msg;
  msg << "unknown class '" << name << "'; available:";
  for (const auto& n : builtin_class_names()) msg << ' ' << n;
  throw InvalidArgument(msg.str());
}

}  // namespace kubilius
