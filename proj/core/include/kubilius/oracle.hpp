#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "kubilius/additive.hpp"
#include "kubilius/assembly_class.hpp"
#include "kubilius/moments.hpp"
#include "kubilius/rational.hpp"

namespace kubilius {

// Component-size multiplicities; s[j] for 1 <= j <= n, s[0] unused.
struct Profile {
  std::vector<std::size_t> s;

  std::size_t order() const;  // sum_j j s_j
  std::size_t components() const;
};

inline constexpr std::size_t kProfileCap = 80;

// Streams the partitions of n in reverse-lexicographic part order:
// (n), (n-1,1), (n-2,2), (n-2,1,1), ... Each is exposed as a Profile.
class ProfileEnumerator {
 public:
  explicit ProfileEnumerator(std::size_t n, std::size_t cap = kProfileCap);

  // Advances to the next profile; false when exhausted. Call before the first access.
  bool next();
  const Profile& profile() const noexcept { return profile_; }
  // Parts in nonincreasing order.
  const std::vector<std::size_t>& parts() const noexcept { return parts_; }

 private:
  std::size_t n_;
  bool started_ = false;
  bool done_ = false;
  std::vector<std::size_t> parts_;
  Profile profile_;
};

void for_each_profile(std::size_t n, const std::function<void(const Profile&)>& visit);

Rational profile_weight(const std::vector<Rational>& lambdas, const Profile& profile);

Rational oracle_q(const AssemblyClass& cls, std::size_t n);
SpectrumPMF oracle_pmf(const AssemblyClass& cls, std::size_t n, std::size_t j);
// (mean, variance) by direct summation; throws EmptySupportError when Q(n) = 0.
std::pair<Rational, Rational> oracle_moments(const AssemblyClass& cls, std::size_t n,
                                             const AdditiveFunction& h);

// One pass over the profiles of n producing everything the engine checks.
struct OracleSummary {
  Rational q;
  std::vector<std::vector<Rational>> pmf;            // pmf[j][k], j = 1..n
  std::vector<std::pair<Rational, Rational>> moments;  // per function: (mean, variance)
  std::vector<Rational> rhs1;                        // per function: sum_j E h_j(k_j)^2
};
OracleSummary oracle_summary(const AssemblyClass& cls, std::size_t n,
                             std::span<const AdditiveFunction> functions);

inline constexpr std::size_t kPermutationOracleCap = 8;

// Enumerates all n! permutations, reads off cycle counts, and returns the
// exact (mean, variance) of h under the uniform measure.
std::pair<Rational, Rational> structure_oracle_permutations(std::size_t n,
                                                            const AdditiveFunction& h);

}  // namespace kubilius
