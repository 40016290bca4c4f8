#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kubilius/rational.hpp"

namespace kubilius {

// h(sigma) = sum_j h_j(k_j(sigma)) with h_j(0) = 0. The completely additive
// kind has h_j(k) = a_j k. Rational-valued functions can be used in exact mode.
class AdditiveFunction {
 public:
  enum class Kind { general, completely_additive };

  using ExactArray = std::function<Rational(std::size_t j, std::size_t k)>;
  using FloatArray = std::function<double(std::size_t j, std::size_t k)>;
  using ExactCoefficients = std::function<Rational(std::size_t j)>;
  using FloatCoefficients = std::function<double(std::size_t j)>;

  static AdditiveFunction general(std::string name, ExactArray h);
  static AdditiveFunction general_float(std::string name, FloatArray h);
  static AdditiveFunction complete(std::string name, ExactCoefficients a);
  static AdditiveFunction complete_float(std::string name, FloatCoefficients a);

  Kind kind() const noexcept { return kind_; }
  bool is_complete() const noexcept { return kind_ == Kind::completely_additive; }
  bool rational_valued() const noexcept { return static_cast<bool>(exact_array_); }
  const std::string& name() const noexcept { return name_; }

  // h_j(k); zero for k = 0. exact() throws unless rational-valued.
  Rational exact(std::size_t j, std::size_t k) const;
  double value(std::size_t j, std::size_t k) const;

  // a_j; completely additive kind only.
  Rational coefficient_exact(std::size_t j) const;
  double coefficient(std::size_t j) const;

  AdditiveFunction scaled(const Rational& factor) const;
  // The general array h_j(k)^2.
  AdditiveFunction squared() const;

 private:
  AdditiveFunction() = default;

  Kind kind_ = Kind::general;
  std::string name_;
  ExactArray exact_array_;
  FloatArray float_array_;
  ExactCoefficients exact_coefficients_;
  FloatCoefficients float_coefficients_;
};

// Produces one additive function per order n.
struct FunctionFamily {
  std::string name;
  bool depends_on_n = false;
  bool rational_valued = true;
  bool complete = true;
  std::function<AdditiveFunction(std::size_t n)> make;
  // Optional structure used by sweeps: make(n) equals base restricted to
  // sizes j <= cutoff(n), with cutoff nondecreasing in n.
  std::optional<AdditiveFunction> base;
  std::function<std::size_t(std::size_t n)> cutoff;

  AdditiveFunction at(std::size_t n) const { return make(n); }
};

// w           a_j = 1 (number of components)
// log         a_j = log j (float only)
// half        a_j = 1[j <= n/2]
// rademacher  a_j = +-1, seeded
// distinct    h_j(k) = 1[k >= 1] (number of distinct component sizes)
// zero        h = 0
// single:J    h_J(k) = k, all other h_j = 0
FunctionFamily builtin_family(std::string_view spec, std::uint64_t seed = 0);
std::vector<std::string> builtin_family_names();

// The sign used by the rademacher family for size j.
int rademacher_sign(std::uint64_t seed, std::size_t j);

}  // namespace kubilius
