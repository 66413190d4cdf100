#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "zerocross/iterated.hpp"
#include "zerocross/jointlaw.hpp"
#include "zerocross/types.hpp"

namespace zerocross::mcoracle {

struct McConfig {
  std::int64_t paths = 200000;
  double dt = 1e-4;
  std::uint64_t seed = kDefaultSeed;
  int shards = 8;
  bool bridge_correction = true;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
};

/// Per-shard RNG stream seed: splitmix64 output at state seed + (shard+1)
/// increments of the golden-ratio constant. Shards share nothing; merging
/// is by shard order, so results do not depend on thread interleaving.
std::uint64_t shard_seed(std::uint64_t seed, int shard);

/// Last zero of B^mu on [0, t]; paths with no detected crossing yield 0.
std::vector<double> sample_last_zero(double mu, double t, const McConfig& cfg,
                                     int threads = 0);

/// First return to zero after t, censored at `horizon` (absent = censored).
/// Starts from an exact draw of B^mu(t).
std::vector<std::optional<double>> sample_first_return_after(
    double mu, double t, double horizon, const McConfig& cfg, int threads = 0);

/// (last zero before t, first return after t) per path, return censored at
/// `horizon`.
std::vector<jointlaw::ZeroCrossingPair> sample_zero_crossing_pair(
    double mu, double t, double horizon, const McConfig& cfg, int threads = 0);

/// Running max of |B^mu| at grid resolution (discretization bias O(sqrt dt)).
std::vector<double> sample_max_abs(double mu, double t, const McConfig& cfg,
                                   int threads = 0);

/// Recursively nested last zeros per NestedSpec.
std::vector<double> sample_nested(const iterated::NestedSpec& spec,
                                  const McConfig& cfg, int threads = 0);

/// Last zero of B^{mu1} before the inner horizon max|B_2^{mu2}| (or the
/// one-sided max), simulated by composition.
std::vector<double> sample_iterated_last_zero(
    double mu1, double t, const McConfig& cfg, int threads = 0,
    double mu2 = 0.0,
    iterated::HorizonKind kind = iterated::HorizonKind::AbsMax);

Estimate estimate_mean(const std::vector<double>& samples);
Estimate estimate_moment(const std::vector<double>& samples, int m);
Estimate estimate_cdf_at(const std::vector<double>& samples, double x);
/// Fraction of censored (absent) entries.
Estimate estimate_censored_fraction(
    const std::vector<std::optional<double>>& samples);

/// Single-column CSV with header "sample"; censored entries print CENSORED.
void write_samples_csv(std::ostream& out, const std::vector<double>& samples);
void write_samples_csv(std::ostream& out,
                       const std::vector<std::optional<double>>& samples);

}  // namespace zerocross::mcoracle
