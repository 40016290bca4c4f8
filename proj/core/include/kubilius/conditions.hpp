#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kubilius/assembly_class.hpp"
#include "kubilius/number.hpp"

namespace kubilius {

enum class ConditionId {
  strong,     // theta <= rho^j j lambda_j <= Theta, j >= 1
  upper,      // rho^j j lambda_j <= Theta, j >= 1
  lower_sum,  // sum_{j<=n} rho^j j lambda_j >= theta n, n >= n0
  q_lower,    // n Q(n) rho^n >= theta' exp(sum_{j<=n} lambda_j rho^j), n >= 1
};

std::string_view to_string(ConditionId id);
ConditionId parse_condition(std::string_view text);
inline constexpr ConditionId kAllConditions[] = {ConditionId::strong, ConditionId::upper,
                                                 ConditionId::lower_sum, ConditionId::q_lower};

struct WeaklyLogParams {
  Rho rho;
  Number Theta;
  Number theta;
  Number theta_prime;
  std::size_t n0 = 1;
};

// Throws InvalidArgument unless every constant is strictly positive and n0 >= 1.
void validate(const WeaklyLogParams& params);

struct ConditionWitness {
  std::size_t index = 0;  // j for (1)/(2), n for (3)/(4)
  Number lhs;             // attained value of the left-hand side
  Number rhs;             // bound it is compared against
  std::string side;       // "lower" or "upper" for the strong condition
};

struct ConditionVerdict {
  ConditionId condition = ConditionId::upper;
  bool holds = false;
  // Index with the least slack; the first violation of maximal severity when
  // the condition fails.
  std::optional<ConditionWitness> witness;
  std::size_t checked_range = 0;
  bool exact_comparison = false;
  double tolerance = 0.0;
  // Orders n <= N with Q(n) = 0, skipped by the q_lower check.
  std::vector<std::size_t> skipped_orders;
};

inline constexpr double kConditionTolerance = 1e-12;

ConditionVerdict check_condition(const AssemblyClass& cls, const WeaklyLogParams& params,
                                 ConditionId condition, std::size_t N);

// Constants fitted on a range, before the degeneracy test is applied.
struct ConstantFit {
  WeaklyLogParams params;
  bool theta_prime_defined = false;  // some n <= N has Q(n) > 0
};

struct ConstantSearch {
  ConstantFit full;  // fitted on [1, N]
  ConstantFit half;  // fitted on [1, N/2]
  bool degenerate = false;
  std::string reason;
};

ConstantSearch search_constants(const AssemblyClass& cls, const Rho& rho, std::size_t N);

// Absent when theta or theta' is not positive or decays toward 0 as the range grows.
std::optional<WeaklyLogParams> suggest_constants(const AssemblyClass& cls, const Rho& rho,
                                                 std::size_t N);

}  // namespace kubilius
