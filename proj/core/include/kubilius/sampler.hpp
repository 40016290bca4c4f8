#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <boost/random/poisson_distribution.hpp>
#include <vector>

#include "kubilius/additive.hpp"
#include "kubilius/assembly_class.hpp"
#include "kubilius/oracle.hpp"

namespace kubilius {

using Rng = std::mt19937_64;

// Generator for replica stream `stream` of a run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

struct SamplerConfig {
  double tilt = 1.0;
  std::uint64_t max_rejections = 10'000'000;
  std::uint64_t seed = 0;
  // Replicas are split over this many independent streams; results depend on
  // the layout but not on the number of threads executing it.
  std::size_t streams = 16;
  unsigned threads = 1;
};

void validate(const SamplerConfig& config);

struct TiltChoice {
  double x = 1.0;
  bool clamped = false;  // no root in (0, upper]; x = upper
};

// Solves sum_{j<=n} j lambda_j x^j = n by bisection on (0, rho]; falls back to
// x = rho when the sum at rho is still below n.
TiltChoice tune_tilt(const AssemblyClass& cls, std::size_t n);
// Same equation with an explicit upper end for the search.
TiltChoice solve_tilt(const AssemblyClass& cls, std::size_t n, double upper);

// Draws Z_j ~ Poisson(lambda_j x^j) independently for j <= n and keeps the
// vector when sum_j j Z_j = n.
class ProfileSampler {
 public:
  ProfileSampler(const AssemblyClass& cls, std::size_t n, double tilt);

  struct Draw {
    Profile profile;
    std::uint64_t rejections = 0;
  };

  // Throws SamplerError after max_rejections consecutive rejections.
  Draw draw(Rng& rng, std::uint64_t max_rejections) const;

  std::size_t order() const noexcept { return n_; }
  double tilt() const noexcept { return tilt_; }

 private:
  std::size_t n_;
  double tilt_;
  std::vector<double> means_;  // index j
  std::vector<boost::random::poisson_distribution<std::uint64_t, double>> poisson_;
};

struct SampleResult {
  Profile profile;
  std::uint64_t rejections = 0;
};

SampleResult sample_profile(const AssemblyClass& cls, std::size_t n, const SamplerConfig& config);

struct EmpiricalMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double stderr_mean = 0.0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;

  double acceptance_rate() const;
};

// h must be defined for all jk <= n.
EmpiricalMoments empirical_moments(const AssemblyClass& cls, std::size_t n,
                                   const AdditiveFunction& h, std::size_t reps,
                                   const SamplerConfig& config);

struct MarginalSample {
  std::vector<std::uint64_t> counts;  // counts[k] = #samples with k_j = k
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
};

MarginalSample sample_marginal(const AssemblyClass& cls, std::size_t n, std::size_t j,
                               std::size_t reps, const SamplerConfig& config);

// Every accepted profile in stream order, for dumps.
struct ProfileBatch {
  std::vector<Profile> profiles;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
};
ProfileBatch sample_profiles(const AssemblyClass& cls, std::size_t n, std::size_t reps,
                             const SamplerConfig& config);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Pearson test of observed counts against probabilities. Adjacent cells are
// pooled from the tail until each expected count is at least min_expected.
ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& observed,
                                const std::vector<double>& probabilities,
                                double min_expected = 5.0);

}  // namespace kubilius
