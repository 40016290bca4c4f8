#pragma once

#include <cstddef>
#include <vector>

#include "kubilius/rational.hpp"

namespace kubilius::testing {

// H_n^{(power)} = sum_{i<=n} 1/i^power.
inline Rational harmonic(std::size_t n, unsigned power = 1) {
  Rational sum;
  for (std::size_t i = 1; i <= n; ++i) {
    Integer d = 1;
    for (unsigned p = 0; p < power; ++p) d *= static_cast<unsigned long>(i);
    sum += Rational(1, d);
  }
  sum.canonicalize();
  return sum;
}

// Bell numbers B_0..B_n from the Bell triangle.
inline std::vector<Integer> bell_numbers(std::size_t n) {
  std::vector<Integer> bell{1};
  std::vector<Integer> row{1};
  while (bell.size() <= n) {
    std::vector<Integer> next{row.back()};
    for (const auto& x : row) next.push_back(next.back() + x);
    bell.push_back(next.front());
    row = std::move(next);
  }
  return bell;
}

}  // namespace kubilius::testing
