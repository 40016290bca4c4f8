#include "kubilius/sampler.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "kubilius/counting.hpp"
#include "kubilius/errors.hpp"
#include "kubilius/parallel.hpp"

namespace kubilius {
namespace {


constexpr double kTiltTolerance = 1e-10;

double weighted_size_sum(const std::vector<double>& log_jweights, double log_x) {
  double total = 0.0;
  for (std::size_t j = 1; j < log_jweights.size(); ++j) {
    if (std::isinf(log_jweights[j])) continue;
    total += std::exp(log_jweights[j] + static_cast<double>(j) * log_x);
  }
  return total;
}

std::vector<std::size_t> stream_sizes(std::size_t reps, std::size_t streams) {
  std::vector<std::size_t> sizes(streams, reps / streams);
  for (std::size_t i = 0; i < reps % streams; ++i) ++sizes[i];
  return sizes;
}

// Runs `per_sample(stream, profile)` for every accepted sample, stream by
// stream, and returns total accepted/rejected counts.
template <class PerSample>
std::pair<std::uint64_t, std::uint64_t> run_streams(const ProfileSampler& sampler,
                                                    std::size_t reps, const SamplerConfig& config,
                                                    PerSample&& per_sample) {
  const auto sizes = stream_sizes(reps, config.streams);
  std::vector<std::uint64_t> accepted(config.streams, 0), rejected(config.streams, 0);
  parallel_for(config.streams, config.threads, [&](std::size_t stream) {
    Rng rng = make_stream(config.seed, stream);
    for (std::size_t r = 0; r < sizes[stream]; ++r) {
      ProfileSampler::Draw d;
      try {
        d = sampler.draw(rng, config.max_rejections);
      } catch (const SamplerError&) {
        const double attempts = static_cast<double>(accepted[stream] + rejected[stream]) +
                                static_cast<double>(config.max_rejections);
        throw SamplerError("rejection limit of " + std::to_string(config.max_rejections) +
                               " exceeded in stream " + std::to_string(stream),
                           static_cast<double>(accepted[stream]) / attempts);
      }
      ++accepted[stream];
      rejected[stream] += d.rejections;
      per_sample(stream, d.profile);
    }
  });
  std::uint64_t a = 0, rj = 0;
  for (std::size_t i = 0; i < config.streams; ++i) {
    a += accepted[i];
    rj += rejected[i];
  }
  return {a, rj};
}

double configured_tilt(const AssemblyClass&, std::size_t, const SamplerConfig& config) {
  validate(config);
  return config.tilt;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6b75u};
  return Rng(seq);
}

void validate(const SamplerConfig& config) {
  if (!(config.tilt > 0.0) || !std::isfinite(config.tilt))
    throw InvalidArgument("tilt must be positive");
  if (config.max_rejections < 1) throw InvalidArgument("max_rejections must be at least 1");
  if (config.streams < 1) throw InvalidArgument("streams must be at least 1");
}

TiltChoice solve_tilt(const AssemblyClass& cls, std::size_t n, double upper) {
  if (n < 1) throw InvalidArgument("order must be at least 1");
  if (!(upper > 0.0)) throw InvalidArgument("tilt search interval must be positive");
  std::vector<double> log_jweights(n + 1, -std::numeric_limits<double>::infinity());
  bool any = false;
  for (std::size_t j = 1; j <= n; ++j) {
    log_jweights[j] = cls.log_lambda(j) + std::log(static_cast<double>(j));
    any = any || !std::isinf(log_jweights[j]);
  }
  if (!any) throw InvalidArgument("no positive weight among component sizes <= " + std::to_string(n));

  const double target = static_cast<double>(n);
  if (weighted_size_sum(log_jweights, std::log(upper)) < target) return {upper, true};

  // The sum is increasing in x; bisect on log x to resolve small roots.
  double lo = std::log(upper) - 64.0;
  double hi = std::log(upper);
  double mid = hi;
  for (int iter = 0; iter < 400; ++iter) {
    mid = 0.5 * (lo + hi);
    const double value = weighted_size_sum(log_jweights, mid);
    if (std::fabs(value - target) <= kTiltTolerance) break;
    (value < target ? lo : hi) = mid;
    if (hi - lo < 1e-300) break;
  }
  return {std::exp(mid), false};
}

TiltChoice tune_tilt(const AssemblyClass& cls, std::size_t n) {
  return solve_tilt(cls, n, cls.rho().value());
}

ProfileSampler::ProfileSampler(const AssemblyClass& cls, std::size_t n, double tilt)
    : n_(n), tilt_(tilt), means_(n + 1, 0.0) {
  if (n < 1) throw InvalidArgument("order must be at least 1");
  if (!(tilt > 0.0) || !std::isfinite(tilt)) throw InvalidArgument("tilt must be positive");
  if (q_table(cls, n, Mode::scaled).is_zero(n)) throw EmptySupportError(n);
  const double log_x = std::log(tilt);
  for (std::size_t j = 1; j <= n; ++j) {
    const double l = cls.log_lambda(j);
    if (!std::isinf(l)) means_[j] = std::exp(l + static_cast<double>(j) * log_x);
  }
  poisson_.reserve(n + 1);
  for (double m : means_) poisson_.emplace_back(m > 0.0 ? m : 1.0);
}

ProfileSampler::Draw ProfileSampler::draw(Rng& rng, std::uint64_t max_rejections) const {
  Draw out;
  out.profile.s.assign(n_ + 1, 0);
  auto& s = out.profile.s;
  for (;;) {
    std::size_t total = 0;
    bool overflow = false;
    // Largest sizes first so that oversized vectors are rejected early.
    for (std::size_t j = n_; j >= 1; --j) {
      if (means_[j] > 0.0) {
        const std::uint64_t z = poisson_[j](rng);
        if (z > (n_ - total) / j) {
          overflow = true;
          break;
        }
        s[j] = z;
        total += j * z;
      } else {
        s[j] = 0;
      }
    }
    if (!overflow && total == n_) return out;
    std::fill(s.begin(), s.end(), 0);
    if (++out.rejections >= max_rejections)
      throw SamplerError("rejection limit of " + std::to_string(max_rejections) + " exceeded", 0.0);
  }
}

SampleResult sample_profile(const AssemblyClass& cls, std::size_t n, const SamplerConfig& config) {
  const ProfileSampler sampler(cls, n, configured_tilt(cls, n, config));
  Rng rng = make_stream(config.seed, 0);
  auto d = sampler.draw(rng, config.max_rejections);
  return {std::move(d.profile), d.rejections};
}

double EmpiricalMoments::acceptance_rate() const {
  const auto attempts = accepted + rejected;
  return attempts == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempts);
}

EmpiricalMoments empirical_moments(const AssemblyClass& cls, std::size_t n,
                                   const AdditiveFunction& h, std::size_t reps,
                                   const SamplerConfig& config) {
  if (reps < 2) throw InvalidArgument("reps must be at least 2");
  const ProfileSampler sampler(cls, n, configured_tilt(cls, n, config));

  std::vector<std::vector<double>> marks(n + 1);
  for (std::size_t j = 1; j <= n; ++j) {
    marks[j].resize(n / j + 1, 0.0);
    for (std::size_t k = 1; k <= n / j; ++k) marks[j][k] = h.value(j, k);
  }

  // Welford accumulators per stream, merged in stream order.
  struct Welford {
    double count = 0, mean = 0, m2 = 0;
  };
  std::vector<Welford> stats(config.streams);
  const auto [accepted, rejected] =
      run_streams(sampler, reps, config, [&](std::size_t stream, const Profile& p) {
        double value = 0.0;
        for (std::size_t j = 1; j <= n; ++j)
          if (p.s[j] != 0) value += marks[j][p.s[j]];
        auto& w = stats[stream];
        w.count += 1;
        const double delta = value - w.mean;
        w.mean += delta / w.count;
        w.m2 += delta * (value - w.mean);
      });

  Welford total;
  for (const auto& w : stats) {
    if (w.count == 0) continue;
    const double count = total.count + w.count;
    const double delta = w.mean - total.mean;
    total.mean += delta * w.count / count;
    total.m2 += w.m2 + delta * delta * total.count * w.count / count;
    total.count = count;
  }

  EmpiricalMoments out;
  out.accepted = accepted;
  out.rejected = rejected;
  out.mean = total.mean;
  out.variance = total.m2 / (total.count - 1);
  out.stderr_mean = std::sqrt(out.variance / total.count);
  return out;
}

MarginalSample sample_marginal(const AssemblyClass& cls, std::size_t n, std::size_t j,
                               std::size_t reps, const SamplerConfig& config) {
  if (j < 1 || j > n) throw InvalidArgument("component size out of range");
  const ProfileSampler sampler(cls, n, configured_tilt(cls, n, config));
  std::vector<std::vector<std::uint64_t>> counts(config.streams,
                                                 std::vector<std::uint64_t>(n / j + 1, 0));
  const auto [accepted, rejected] = run_streams(
      sampler, reps, config, [&](std::size_t stream, const Profile& p) { ++counts[stream][p.s[j]]; });
  MarginalSample out;
  out.counts.assign(n / j + 1, 0);
  for (const auto& c : counts)
    for (std::size_t k = 0; k < c.size(); ++k) out.counts[k] += c[k];
  out.accepted = accepted;
  out.rejected = rejected;
  return out;
}

ProfileBatch sample_profiles(const AssemblyClass& cls, std::size_t n, std::size_t reps,
                             const SamplerConfig& config) {
  const ProfileSampler sampler(cls, n, configured_tilt(cls, n, config));
  std::vector<std::vector<Profile>> per_stream(config.streams);
  const auto [accepted, rejected] = run_streams(
      sampler, reps, config,
      [&](std::size_t stream, const Profile& p) { per_stream[stream].push_back(p); });
  ProfileBatch out;
  for (auto& profiles : per_stream)
    for (auto& p : profiles) out.profiles.push_back(std::move(p));
  out.accepted = accepted;
  out.rejected = rejected;
  return out;
}

ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& observed,
                                const std::vector<double>& probabilities, double min_expected) {
  if (observed.size() != probabilities.size())
    throw InvalidArgument("observed and expected cell counts differ");
  double total = 0.0;
  for (auto c : observed) total += static_cast<double>(c);
  if (total == 0.0) throw InvalidArgument("no observations");

  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double obs = 0.0, exp = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    obs += static_cast<double>(observed[i]);
    exp += probabilities[i] * total;
    if (exp >= min_expected) {
      cells.emplace_back(obs, exp);
      obs = exp = 0.0;
    }
  }
  if (exp > 0.0 || obs > 0.0) {
    if (cells.empty())
      cells.emplace_back(obs, exp);
    else {
      cells.back().first += obs;
      cells.back().second += exp;
    }
  }

  ChiSquareResult out;
  for (const auto& [o, e] : cells) {
    if (e == 0.0) {
      if (o > 0.0) out.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    out.statistic += (o - e) * (o - e) / e;
  }
  out.degrees_of_freedom = cells.size() > 1 ? cells.size() - 1 : 0;
  if (out.degrees_of_freedom == 0)
    out.p_value = 1.0;
  else if (std::isinf(out.statistic))
    out.p_value = 0.0;
  else
    out.p_value = boost::math::cdf(boost::math::complement(
        boost::math::chi_squared(static_cast<double>(out.degrees_of_freedom)), out.statistic));
  return out;
}

}  // namespace kubilius
