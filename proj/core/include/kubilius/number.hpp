#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "kubilius/rational.hpp"

namespace kubilius {

// Exact rationals are the reference representation. The scaled mode stores
// Q(n)·rho^n and related quantities as doubles so magnitudes stay polynomial.
enum class Mode { exact, scaled };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

// A value produced in either mode.
class Number {
 public:
  Number() : value_(0.0) {}
  Number(Rational value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Number(double value) : value_(value) {}                // NOLINT(google-explicit-constructor)

  bool is_exact() const noexcept { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const;
  double to_double() const;
  bool is_zero() const;
  int sign() const;

  // "p/q" for exact values, 17 significant digits otherwise.
  std::string to_string() const;

  friend bool operator==(const Number& a, const Number& b) { return a.value_ == b.value_; }

 private:
  std::variant<Rational, double> value_;
};

// Parses a value written by Number::to_string in the given mode.
Number parse_number(std::string_view text, Mode mode);

std::string format_double(double value);

// a < b, exact when both are exact.
bool less(const Number& a, const Number& b);

Number divide(const Number& numerator, const Number& denominator);

double relative_error(double approx, double reference);

}  // namespace kubilius
