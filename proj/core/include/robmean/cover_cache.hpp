#pragma once

#include <cstdint>

#include "robmean/sphere_cover.hpp"

namespace robmean {

// Process-wide cache of constructed covers keyed by (d, gamma, seed).
// Covers are immutable once built; the cache is thread-safe and exists
// because greedy construction at d >= 3 is far more expensive than any
// single use.
const Cover& shared_cover(int d, double gamma, std::uint64_t seed);

// Net resolution used by the harness defaults: 1/100 where the greedy
// construction can certify it in reasonable time (d <= 2), coarser above.
// Runs with gamma > 1/100 are labeled "constants not per-paper" in reports.
double default_net_gamma(int d);

}  // namespace robmean
