#include "zerocross/mcoracle.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace zerocross::mcoracle {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void check_cfg(const McConfig& cfg, double t) {
  if (cfg.paths < 1000) {
    throw std::domain_error("mcoracle: need at least 1000 paths");
  }
  if (!(t > 0.0)) throw std::domain_error("mcoracle: t must be positive");
  if (!(cfg.dt > 0.0) || cfg.dt > t / 100.0) {
    throw std::domain_error("mcoracle: dt must satisfy 0 < dt <= t/100");
  }
  if (cfg.shards < 1) throw std::domain_error("mcoracle: shards must be >= 1");
}

// Runs fn(shard, rng, first_path, n_paths) across shards on a small worker
// pool. Shards never share state and outputs are merged in shard order, so
// the result is independent of thread scheduling.
template <typename PerShard>
void run_sharded(const McConfig& cfg, int threads, PerShard fn) {
  const int shards = cfg.shards;
  const int pool = std::max(
      1, std::min(threads > 0 ? threads
                              : static_cast<int>(std::thread::hardware_concurrency()),
                  shards));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int s = next.fetch_add(1); s < shards; s = next.fetch_add(1)) {
      std::mt19937_64 rng(shard_seed(cfg.seed, s));
      const std::int64_t first = cfg.paths * s / shards;
      const std::int64_t last = cfg.paths * (s + 1) / shards;
      fn(s, rng, first, last - first);
    }
  };
  if (pool == 1) {
    worker();
    return;
  }
  std::vector<std::thread> team;
  team.reserve(pool);
  for (int i = 0; i < pool; ++i) team.emplace_back(worker);
  for (auto& th : team) th.join();
}

struct PathGrid {
  std::int64_t steps;
  double dt;
};

PathGrid snap_grid(double span, double dt) {
  const auto steps =
      std::max<std::int64_t>(1, std::llround(std::ceil(span / dt - 1e-9)));
  return {steps, span / static_cast<double>(steps)};
}

// Last zero of a drifted path on [0, span] at grid resolution; crossings
// inside a step are detected by sign change or, with the bridge correction,
// with the exact conditional probability exp(-2 x0 x1 / dt).
double simulate_last_zero(std::mt19937_64& rng, double mu, double span,
                          double dt, bool bridge) {
  if (span <= 1e-12) return 0.0;
  const PathGrid grid = snap_grid(span, dt);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  const double drift = mu * grid.dt;
  const double vol = std::sqrt(grid.dt);
  double x = 0.0;
  double last = 0.0;
  for (std::int64_t i = 0; i < grid.steps; ++i) {
    const double xn = x + drift + vol * gauss(rng);
    bool crossed = (x * xn <= 0.0);
    if (!crossed && bridge) {
      const double expo = -2.0 * x * xn / grid.dt;
      // exp(expo) < 1e-18 cannot win a uniform draw; skip the RNG call.
      if (expo > -41.0) crossed = unif(rng) < std::exp(expo);
    }
    if (crossed) last = (static_cast<double>(i) + unif(rng)) * grid.dt;
    x = xn;
  }
  return last;
}

double simulate_running_max(std::mt19937_64& rng, double mu, double span,
                            double dt, bool absolute) {
  const PathGrid grid = snap_grid(span, dt);
  std::normal_distribution<double> gauss;
  const double drift = mu * grid.dt;
  const double vol = std::sqrt(grid.dt);
  double x = 0.0;
  double peak = 0.0;
  for (std::int64_t i = 0; i < grid.steps; ++i) {
    x += drift + vol * gauss(rng);
    peak = std::max(peak, absolute ? std::abs(x) : x);
  }
  return peak;
}

// First return to zero after `t`, starting from an exact draw of B(t).
std::optional<double> simulate_first_return(std::mt19937_64& rng, double mu,
                                            double t, double horizon,
                                            double dt, bool bridge) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  double x = mu * t + std::sqrt(t) * gauss(rng);
  if (x == 0.0) return t;
  const PathGrid grid = snap_grid(horizon - t, dt);
  const double drift = mu * grid.dt;
  const double vol = std::sqrt(grid.dt);
  for (std::int64_t i = 0; i < grid.steps; ++i) {
    const double xn = x + drift + vol * gauss(rng);
    bool crossed = (x * xn <= 0.0);
    if (!crossed && bridge) {
      const double expo = -2.0 * x * xn / grid.dt;
      if (expo > -41.0) crossed = unif(rng) < std::exp(expo);
    }
    if (crossed) return t + (static_cast<double>(i) + unif(rng)) * grid.dt;
    x = xn;
    // Escaped with the drift: the probability of ever returning from x is
    // exp(-2|mu x|) < 1e-20, below any tolerance in use.
    if (mu * x > 0.0 && 2.0 * mu * x > 46.0) return std::nullopt;
  }
  return std::nullopt;
}

Estimate summarize(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mcoracle: empty sample set");
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= n;
  return {mean, std::sqrt(var / n), static_cast<std::int64_t>(values.size())};
}

}  // namespace

std::uint64_t shard_seed(std::uint64_t seed, int shard) {
  return splitmix64(seed + kGolden * static_cast<std::uint64_t>(shard + 1));
}

std::vector<double> sample_last_zero(double mu, double t, const McConfig& cfg,
                                     int threads) {
  check_cfg(cfg, t);
  std::vector<double> out(static_cast<std::size_t>(cfg.paths));
  run_sharded(cfg, threads,
              [&](int, std::mt19937_64& rng, std::int64_t first,
                  std::int64_t count) {
                for (std::int64_t p = 0; p < count; ++p) {
                  out[static_cast<std::size_t>(first + p)] = simulate_last_zero(
                      rng, mu, t, cfg.dt, cfg.bridge_correction);
                }
              });
  return out;
}

std::vector<std::optional<double>> sample_first_return_after(
    double mu, double t, double horizon, const McConfig& cfg, int threads) {
  check_cfg(cfg, t);
  if (!(horizon > t)) throw std::domain_error("mcoracle: horizon must exceed t");
  std::vector<std::optional<double>> out(static_cast<std::size_t>(cfg.paths));
  run_sharded(cfg, threads,
              [&](int, std::mt19937_64& rng, std::int64_t first,
                  std::int64_t count) {
                for (std::int64_t p = 0; p < count; ++p) {
                  out[static_cast<std::size_t>(first + p)] =
                      simulate_first_return(rng, mu, t, horizon, cfg.dt,
                                            cfg.bridge_correction);
                }
              });
  return out;
}

std::vector<jointlaw::ZeroCrossingPair> sample_zero_crossing_pair(
    double mu, double t, double horizon, const McConfig& cfg, int threads) {
  check_cfg(cfg, t);
  if (!(horizon > t)) throw std::domain_error("mcoracle: horizon must exceed t");
  std::vector<jointlaw::ZeroCrossingPair> out(
      static_cast<std::size_t>(cfg.paths));
  run_sharded(
      cfg, threads,
      [&](int, std::mt19937_64& rng, std::int64_t first, std::int64_t count) {
        std::normal_distribution<double> gauss;
        std::uniform_real_distribution<double> unif;
        for (std::int64_t p = 0; p < count; ++p) {
          const PathGrid grid = snap_grid(horizon, cfg.dt);
          const double drift = mu * grid.dt;
          const double vol = std::sqrt(grid.dt);
          double x = 0.0;
          double last = 0.0;
          std::optional<double> ret;
          for (std::int64_t i = 0; i < grid.steps; ++i) {
            const double xn = x + drift + vol * gauss(rng);
            bool crossed = (x * xn <= 0.0);
            if (!crossed && cfg.bridge_correction) {
              const double expo = -2.0 * x * xn / grid.dt;
              if (expo > -41.0) crossed = unif(rng) < std::exp(expo);
            }
            if (crossed) {
              const double when =
                  (static_cast<double>(i) + unif(rng)) * grid.dt;
              if (when < t) {
                last = when;
              } else if (!ret) {
                ret = when;
              }
            }
            x = xn;
            // The first crossing past t settles both coordinates; an escape
            // with the drift (return probability < 1e-20) settles them too.
            if (ret) break;
            if (mu * x > 0.0 && 2.0 * mu * x > 46.0) break;
          }
          out[static_cast<std::size_t>(first + p)] = {last, ret};
        }
      });
  return out;
}

std::vector<double> sample_max_abs(double mu, double t, const McConfig& cfg,
                                   int threads) {
  check_cfg(cfg, t);
  std::vector<double> out(static_cast<std::size_t>(cfg.paths));
  run_sharded(cfg, threads,
              [&](int, std::mt19937_64& rng, std::int64_t first,
                  std::int64_t count) {
                for (std::int64_t p = 0; p < count; ++p) {
                  out[static_cast<std::size_t>(first + p)] =
                      simulate_running_max(rng, mu, t, cfg.dt, true);
                }
              });
  return out;
}

std::vector<double> sample_nested(const iterated::NestedSpec& spec,
                                  const McConfig& cfg, int threads) {
  iterated::validate(spec);
  check_cfg(cfg, spec.t);
  std::vector<double> out(static_cast<std::size_t>(cfg.paths));
  run_sharded(cfg, threads,
              [&](int, std::mt19937_64& rng, std::int64_t first,
                  std::int64_t count) {
                for (std::int64_t p = 0; p < count; ++p) {
                  double horizon = spec.t;
                  // Motion `depth` runs on [0, t]; each following motion on
                  // [0, previous last zero]. The step shrinks with the
                  // horizon to keep dt <= horizon/100.
                  for (int level = spec.depth - 1; level >= 0; --level) {
                    const double dt =
                        std::min(cfg.dt, horizon / 100.0);
                    horizon = simulate_last_zero(rng, spec.drifts[level],
                                                 horizon, dt,
                                                 cfg.bridge_correction);
                    if (horizon <= 0.0) break;
                  }
                  out[static_cast<std::size_t>(first + p)] = horizon;
                }
              });
  return out;
}

std::vector<double> sample_iterated_last_zero(double mu1, double t,
                                              const McConfig& cfg, int threads,
                                              double mu2,
                                              iterated::HorizonKind kind) {
  check_cfg(cfg, t);
  std::vector<double> out(static_cast<std::size_t>(cfg.paths));
  run_sharded(
      cfg, threads,
      [&](int, std::mt19937_64& rng, std::int64_t first, std::int64_t count) {
        for (std::int64_t p = 0; p < count; ++p) {
          const double horizon = simulate_running_max(
              rng, mu2, t, cfg.dt, kind == iterated::HorizonKind::AbsMax);
          const double dt = horizon > 0.0
                                ? std::min(cfg.dt, horizon / 100.0)
                                : cfg.dt;
          out[static_cast<std::size_t>(first + p)] = simulate_last_zero(
              rng, mu1, horizon, dt, cfg.bridge_correction);
        }
      });
  return out;
}

Estimate estimate_mean(const std::vector<double>& samples) {
  return summarize(samples);
}

Estimate estimate_moment(const std::vector<double>& samples, int m) {
  if (m < 1) throw std::domain_error("mcoracle: moment order must be >= 1");
  if (samples.empty()) throw std::invalid_argument("mcoracle: empty sample set");
  std::vector<double> powered(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    powered[i] = std::pow(samples[i], m);
  }
  return summarize(powered);
}

Estimate estimate_cdf_at(const std::vector<double>& samples, double x) {
  if (samples.empty()) throw std::invalid_argument("mcoracle: empty sample set");
  std::vector<double> indicator(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    indicator[i] = samples[i] < x ? 1.0 : 0.0;
  }
  return summarize(indicator);
}

Estimate estimate_censored_fraction(
    const std::vector<std::optional<double>>& samples) {
  if (samples.empty()) throw std::invalid_argument("mcoracle: empty sample set");
  std::vector<double> indicator(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    indicator[i] = samples[i] ? 0.0 : 1.0;
  }
  return summarize(indicator);
}

void write_samples_csv(std::ostream& out, const std::vector<double>& samples) {
  out << "sample\n";
  char buf[32];
  for (double v : samples) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << '\n';
  }
}

void write_samples_csv(std::ostream& out,
                       const std::vector<std::optional<double>>& samples) {
  out << "sample\n";
  char buf[32];
  for (const auto& v : samples) {
    if (v) {
      std::snprintf(buf, sizeof(buf), "%.17g", *v);
      out << buf << '\n';
    } else {
      out << "CENSORED\n";
    }
  }
}

}  // namespace zerocross::mcoracle
