#include "kubilius/additive.hpp"

#include <cmath>
#include <random>
#include <string>

#include "kubilius/errors.hpp"

namespace kubilius {

AdditiveFunction AdditiveFunction::general(std::string name, ExactArray h) {
  AdditiveFunction f;
  f.kind_ = Kind::general;
  f.name_ = std::move(name);
  f.exact_array_ = std::move(h);
  f.float_array_ = [exact = f.exact_array_](std::size_t j, std::size_t k) {
    return to_double(exact(j, k));
  };
  return f;
}

AdditiveFunction AdditiveFunction::general_float(std::string name, FloatArray h) {
  AdditiveFunction f;
  f.kind_ = Kind::general;
  f.name_ = std::move(name);
  f.float_array_ = std::move(h);
  return f;
}

AdditiveFunction AdditiveFunction::complete(std::string name, ExactCoefficients a) {
  AdditiveFunction f;
  f.kind_ = Kind::completely_additive;
  f.name_ = std::move(name);
  f.exact_coefficients_ = std::move(a);
  f.float_coefficients_ = [a = f.exact_coefficients_](std::size_t j) { return to_double(a(j)); };
  f.exact_array_ = [a = f.exact_coefficients_](std::size_t j, std::size_t k) {
    return Rational(a(j) * k);
  };
  f.float_array_ = [a = f.float_coefficients_](std::size_t j, std::size_t k) {
    return a(j) * static_cast<double>(k);
  };
  return f;
}

AdditiveFunction AdditiveFunction::complete_float(std::string name, FloatCoefficients a) {
  AdditiveFunction f;
  f.kind_ = Kind::completely_additive;
  f.name_ = std::move(name);
  f.float_coefficients_ = std::move(a);
  f.float_array_ = [a = f.float_coefficients_](std::size_t j, std::size_t k) {
    return a(j) * static_cast<double>(k);
  };
  return f;
}

Rational AdditiveFunction::exact(std::size_t j, std::size_t k) const {
  if (!exact_array_)
    throw InvalidArgument("additive function '" + name_ + "' is not rational-valued");
  return k == 0 ? Rational(0) : exact_array_(j, k);
}

double AdditiveFunction::value(std::size_t j, std::size_t k) const {
  return k == 0 ? 0.0 : float_array_(j, k);
}

Rational AdditiveFunction::coefficient_exact(std::size_t j) const {
  if (!is_complete())
    throw InvalidArgument("additive function '" + name_ + "' is not completely additive");
  if (!exact_coefficients_)
    throw InvalidArgument("additive function '" + name_ + "' is not rational-valued");
  return exact_coefficients_(j);
}

double AdditiveFunction::coefficient(std::size_t j) const {
  if (!is_complete())
    throw InvalidArgument("additive function '" + name_ + "' is not completely additive");
  return float_coefficients_(j);
}

AdditiveFunction AdditiveFunction::scaled(const Rational& factor) const {
  const std::string scaled_name = to_string(factor) + "*" + name_;
  const double f = to_double(factor);
  if (is_complete()) {
    if (exact_coefficients_)
      return complete(scaled_name, [a = exact_coefficients_, factor](std::size_t j) {
        return Rational(factor * a(j));
      });
    return complete_float(scaled_name, [a = float_coefficients_, f](std::size_t j) {
      return f * a(j);
    });
  }
  if (exact_array_)
    return general(scaled_name, [h = exact_array_, factor](std::size_t j, std::size_t k) {
      return Rational(factor * h(j, k));
    });
  return general_float(scaled_name, [h = float_array_, f](std::size_t j, std::size_t k) {
    return f * h(j, k);
  });
}

AdditiveFunction AdditiveFunction::squared() const {
  const std::string squared_name = "(" + name_ + ")^2";
  if (exact_array_)
    return general(squared_name, [h = exact_array_](std::size_t j, std::size_t k) {
      const Rational v = h(j, k);
      return Rational(v * v);
    });
  return general_float(squared_name, [h = float_array_](std::size_t j, std::size_t k) {
    const double v = h(j, k);
    return v * v;
  });
}

// ---------------------------------------------------------------------------
// Families

int rademacher_sign(std::uint64_t seed, std::size_t j) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j >> 32)};
  std::mt19937_64 rng(seq);
  return (rng() >> 63) != 0 ? 1 : -1;
}

std::vector<std::string> builtin_family_names() {
  return {"w", "log", "half", "rademacher", "distinct", "zero", "single:J"};
}

FunctionFamily builtin_family(std::string_view spec, std::uint64_t seed) {
  FunctionFamily family;
  family.name = std::string(spec);
  if (spec == "w") {
    family.make = [](std::size_t) {
      return AdditiveFunction::complete("w", [](std::size_t) { return Rational(1); });
    };
  } else if (spec == "log") {
    family.rational_valued = false;
    family.make = [](std::size_t) {
      return AdditiveFunction::complete_float(
          "log", [](std::size_t j) { return std::log(static_cast<double>(j)); });
    };
  } else if (spec == "half") {
    family.depends_on_n = true;
    family.make = [](std::size_t n) {
      return AdditiveFunction::complete("half", [n](std::size_t j) {
        return Rational(2 * j <= n ? 1 : 0);
      });
    };
    family.base = AdditiveFunction::complete("half", [](std::size_t) { return Rational(1); });
    family.cutoff = [](std::size_t n) { return n / 2; };
  } else if (spec == "rademacher") {
    family.name = "rademacher(seed=" + std::to_string(seed) + ")";
    family.make = [seed](std::size_t) {
      return AdditiveFunction::complete("rademacher", [seed](std::size_t j) {
        return Rational(rademacher_sign(seed, j));
      });
    };
  } else if (spec == "distinct") {
    family.complete = false;
    family.make = [](std::size_t) {
      return AdditiveFunction::general("distinct", [](std::size_t, std::size_t k) {
        return Rational(k >= 1 ? 1 : 0);
      });
    };
  } else if (spec == "zero") {
    family.make = [](std::size_t) {
      return AdditiveFunction::complete("zero", [](std::size_t) { return Rational(0); });
    };
  } else if (spec.starts_with("single:")) {
    std::size_t size = 0;
    try {
      size = std::stoul(std::string(spec.substr(7)));
    } catch (const std::exception&) {
      throw InvalidArgument("malformed family '" + std::string(spec) + "'");
    }
    if (size == 0) throw InvalidArgument("family single:J needs J >= 1");
    family.make = [size](std::size_t) {
      return AdditiveFunction::complete("single:" + std::to_string(size), [size](std::size_t j) {
        return Rational(j == size ? 1 : 0);
      });
    };
  } else {
    std::string msg = "unknown family '" + std::string(spec) + "'; available:";
    for (const auto& n : builtin_family_names()) msg += " " + n;
    throw InvalidArgument(msg);
  }
  return family;
}

}  // namespace kubilius
