#include "gegenbad/rng.hpp"

#include <cmath>

namespace gegenbad {
namespace rng {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Stafford mix13 finalizer; bijective with full avalanche, so adjacent
// counters decorrelate in a single application.
std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}

std::uint64_t word(std::uint64_t seed, std::uint64_t counter) {
    return mix(mix(seed + 0x9e3779b97f4a7c15ULL) + counter);
}

double uniform01(std::uint64_t seed, std::uint64_t counter) {
    // top 53 bits, offset to the cell center: range [2^-54, 1 - 2^-54]
    return (static_cast<double>(word(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
}

void gaussian_pair(std::uint64_t seed, std::uint64_t counter, double* out_a, double* out_b) {
    const double u1 = uniform01(seed, counter);
    const double u2 = uniform01(seed, counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    *out_a = r * std::cos(kTwoPi * u2);
    *out_b = r * std::sin(kTwoPi * u2);
}

}
}
