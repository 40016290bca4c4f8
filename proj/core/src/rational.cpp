#include "kubilius/rational.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "kubilius/errors.hpp"

namespace kubilius {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InvalidArgument("malformed rational '" + std::string(whole) + "'");
  Integer value(std::string(s), 10);
  return negative ? Integer(-value) : value;
}

double log_abs_integer(const mpz_class& z) {
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::numbers::ln2;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw InvalidArgument("empty rational");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Integer num = parse_integer(trim(s.substr(0, slash)), s);
    const Integer den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(s) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Decimal: sign, digits, optional fraction, optional exponent.
  std::string_view body = s;
  long exponent = 0;
  if (const auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    const Integer exp = parse_integer(body.substr(e + 1), s);
    if (!exp.fits_slong_p() || abs(exp) > 100000) throw InvalidArgument("exponent out of range");
    exponent = exp.get_si();
    body = body.substr(0, e);
  }
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  std::string digits;
  long fraction_digits = 0;
  if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto int_part = body.substr(0, dot);
    const auto frac_part = body.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)))
      throw InvalidArgument("malformed rational '" + std::string(s) + "'");
    digits = std::string(int_part) + std::string(frac_part);
    fraction_digits = static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(body)) throw InvalidArgument("malformed rational '" + std::string(s) + "'");
    digits = std::string(body);
  }
  Rational r{Integer(digits, 10)};
  const long shift = exponent - fraction_digits;
  Integer ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  if (shift >= 0)
    r *= ten_power;
  else
    r /= ten_power;
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  return v.get_str();
}

double log_abs(const Rational& value) {
  if (value == 0) throw InvalidArgument("log of zero");
  return log_abs_integer(value.get_num()) - log_abs_integer(value.get_den());
}

double to_double(const Rational& value) {
  if (value == 0) return 0.0;
  const auto num_bits = static_cast<long>(mpz_sizeinbase(value.get_num_mpz_t(), 2));
  const auto den_bits = static_cast<long>(mpz_sizeinbase(value.get_den_mpz_t(), 2));
  if (std::labs(num_bits - den_bits) < 1000) return value.get_d();
  const double magnitude = std::exp(log_abs(value));
  return sgn(value) < 0 ? -magnitude : magnitude;
}

Integer factorial(std::size_t n) {
  Integer result;
  mpz_fac_ui(result.get_mpz_t(), static_cast<unsigned long>(n));
  return result;
}

Rational power(const Rational& base, std::size_t exponent) {
  Rational result;
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  result.canonicalize();
  return result;
}

}  // namespace kubilius
