#pragma once

#include "gegenbad/gegenbauer.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gegenbad {

// Reduced p/q with 0 < p < q, standing for the angle theta = pi p/q and
// the point x = cos(theta).
struct RationalAngle {
    std::int64_t p = 1;
    std::int64_t q = 2;

    static RationalAngle make(std::int64_t p, std::int64_t q);  // validates and reduces

    double theta() const;
    // cos(pi p/q) evaluated in long double and split into a double pair
    // (value, residual) for extended-precision consumers.
    double x() const;
    std::pair<double, double> x_extended() const;
};

struct ContinuedFraction {
    std::vector<std::int64_t> terms;  // partial quotients a_1, a_2, ...
    bool value_is_rational = false;   // expansion terminated exactly
    bool precision_exhausted = false; // stopped early, terms are partial
};

// min over integers m of |x - m|; lands in [0, 1/2].
double dist_to_nearest_int(double x);

// The phase gap
//   X = min over n in {1..q} of || (n + lambda) p/q - (lambda+1)/2 ||,
// computed in exact integer arithmetic when lambda is rational (the
// argument is then A_n / (2 q v) for integer A_n), in floating point
// otherwise.
double phase_gap(const RationalAngle& angle, const OrderParam& lambda);

// Smallest n in {1..q} with lambda (2p - q) + 2 n p - q an integer
// divisible by 2q (zero counts as divisible), or nullopt when no such n
// exists. Nonempty exactly when phase_gap vanishes. For irrational
// lambda the integrality of lambda (2p - q) is decided within 1e-12.
std::optional<int> divisibility_obstruction(const RationalAngle& angle,
                                            const OrderParam& lambda);

// Standard expansion of alpha in (0,1). The expansion stops at `depth`
// terms, at exact termination (value_is_rational), or at the
// double-precision reliability horizon (60 terms, or a convergent
// denominator near 2^26), whichever comes first; the horizon case
// returns the partial result with precision_exhausted set.
ContinuedFraction continued_fraction(double alpha, int depth);

// Reduced p/q with q <= q_max and |x - cos(pi p/q)| <= tol, found by
// scanning convergents and mediants of arccos(x)/pi. nullopt is a
// failure to recognize, never a proof of irrationality.
std::optional<RationalAngle> recognize_rational_angle(double x, std::int64_t q_max,
                                                      double tol);

}
