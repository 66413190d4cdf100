#pragma once

#include <cstdint>
#include <ostream>

#include "zerocross/types.hpp"

namespace zerocross::selftest {

enum class Suite { Quick, Full };

/// Runs the analytic-vs-analytic and analytic-vs-Monte-Carlo check suite,
/// writing one row per check to `report`. Returns the number of failures.
/// Output is a deterministic function of (suite, seed).
int run(Suite suite, std::uint64_t seed, int threads, std::ostream& report);

}  // namespace zerocross::selftest
