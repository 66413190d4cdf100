#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zerocross {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Seed used by the CLI and the self-test suite when none is given, so
/// published tables are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 12345;

/// Drift rate and time horizon; parameterizes every law in the library.
/// All analytic laws depend on mu only through mu^2.
struct DriftClock {
  double mu = 0.0;  // drift, displacement per unit time
  double t = 1.0;   // horizon, must be positive
};

inline void validate(const DriftClock& clock, const char* module) {
  if (!(clock.t > 0.0)) {
    throw std::domain_error(std::string(module) + ": horizon t must be positive");
  }
}

}  // namespace zerocross
