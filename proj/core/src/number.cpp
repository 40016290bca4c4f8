#include "kubilius/number.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "kubilius/errors.hpp"

namespace kubilius {

std::string_view to_string(Mode mode) { return mode == Mode::exact ? "exact" : "float"; }

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::exact;
  if (text == "float" || text == "scaled") return Mode::scaled;
  throw InvalidArgument("unknown mode '" + std::string(text) + "' (expected exact or float)");
}

const Rational& Number::exact() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return *r;
  throw InvalidArgument("value is not exact");
}

double Number::to_double() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return kubilius::to_double(*r);
  return std::get<double>(value_);
}

bool Number::is_zero() const { return sign() == 0; }

int Number::sign() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return sgn(*r);
  const double d = std::get<double>(value_);
  return (d > 0) - (d < 0);
}

std::string Number::to_string() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return kubilius::to_string(*r);
  return format_double(std::get<double>(value_));
}

std::string format_double(double value) {
  if (value == 0.0) return "0";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

Number parse_number(std::string_view text, Mode mode) {
  if (mode == Mode::exact) return parse_rational(text);
  const std::string s(text);
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw InvalidArgument("malformed number '" + s + "'");
  return value;
}

bool less(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() < b.exact();
  return a.to_double() < b.to_double();
}

Number divide(const Number& numerator, const Number& denominator) {
  if (numerator.is_exact() && denominator.is_exact()) {
    if (denominator.exact() == 0) throw InvalidArgument("division by zero");
    return Rational(numerator.exact() / denominator.exact());
  }
  return numerator.to_double() / denominator.to_double();
}

double relative_error(double approx, double reference) {
  if (reference == 0.0) return std::fabs(approx);
  return std::fabs(approx - reference) / std::fabs(reference);
}

}  // namespace kubilius
