#pragma once

#include <cstdint>

namespace gegenbad {

// Counter-based deterministic stream: word(seed, counter) is a pure
// function, so any sample index can be generated independently of the
// others and results never depend on how work is split across workers.
namespace rng {

std::uint64_t word(std::uint64_t seed, std::uint64_t counter);

// uniform in (0,1), strictly inside
double uniform01(std::uint64_t seed, std::uint64_t counter);

// standard normal pair by Box-Muller from counters (counter, counter+1)
void gaussian_pair(std::uint64_t seed, std::uint64_t counter, double* out_a, double* out_b);

}

}
