#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kubilius/rational.hpp"

namespace kubilius {

// Radius parameter of a class. Either an exact positive rational or exp(r)
// for rational r (which covers the 1/e radius of mappings and forests).
class Rho {
 public:
  // rho = 1.
  Rho();
  static Rho exact(const Rational& value);
  static Rho exp_of(const Rational& exponent);

  // "p/q", decimal, "1/e", "e^-1", or "exp(r)".
  static Rho parse(std::string_view text);

  bool is_exact() const noexcept { return exact_.has_value(); }
  const Rational& exact_value() const;
  double value() const noexcept { return value_; }
  double log() const noexcept { return log_; }
  const std::string& text() const noexcept { return text_; }

 private:
  std::optional<Rational> exact_;
  double value_ = 1.0;
  double log_ = 0.0;
  std::string text_;
};

// A class of assemblies given by its component weights lambda_j = g_j / j!.
// Immutable; copies share a lazily filled weight cache.
class AssemblyClass {
 public:
  using ExactWeight = std::function<Rational(std::size_t j)>;
  // log(lambda_j) in floating point, -inf when lambda_j = 0.
  using LogWeight = std::function<double(std::size_t j)>;

  AssemblyClass(std::string name, std::string description, std::string formula, Rho rho,
                ExactWeight lambda, LogWeight log_lambda = {});

  const std::string& name() const noexcept { return name_; }
  const std::string& description() const noexcept { return description_; }
  const std::string& formula() const noexcept { return formula_; }
  const Rho& rho() const noexcept { return rho_; }

  // lambda_j for j >= 1.
  Rational lambda(std::size_t j) const;
  double log_lambda(std::size_t j) const;
  double lambda_float(std::size_t j) const;

  // Index 0 holds 0; entries 1..n hold lambda_j.
  std::vector<Rational> lambdas(std::size_t n) const;
  // rho^j lambda_j as doubles, computed in log space.
  std::vector<double> scaled_lambdas(std::size_t n, const Rho& rho) const;
  std::vector<double> scaled_lambdas(std::size_t n) const { return scaled_lambdas(n, rho_); }

  AssemblyClass with_rho(Rho rho) const;

 private:
  struct Cache;

  std::string name_;
  std::string description_;
  std::string formula_;
  Rho rho_;
  ExactWeight lambda_;
  LogWeight log_lambda_;
  std::shared_ptr<Cache> cache_;
};

std::vector<std::string> builtin_class_names();

// permutations, mappings, two_regular_graphs, set_partitions, forests.
AssemblyClass builtin_class(std::string_view name);

// Document accepted by class_from_config. Exact values are strings so that
// rationals survive serialization.
struct ClassConfig {
  std::string name;
  std::string description;
  std::optional<std::string> rho;
  std::optional<std::vector<std::string>> weights;
  std::optional<std::string> formula;
  std::map<std::string, std::string> params;
};

// Formulas: "ewens" {theta}: theta/j; "cycles" {scale, min}: scale/j for
// j >= min; "geometric" {scale, ratio}: scale*ratio^j/j; "builtin" {name}.
AssemblyClass class_from_config(const ClassConfig& config);

ClassConfig parse_class_config(std::string_view json_text);
ClassConfig load_class_config(const std::string& path);

// Built-in name, or a path to a JSON class document.
AssemblyClass resolve_class(std::string_view name_or_path);

}  // namespace kubilius
