#include "gegenbad/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gegenbad {

namespace {

using i128 = __int128;

// positive remainder in [0, m)
i128 mod_pos(i128 v, i128 m) {
    i128 r = v % m;
    return r < 0 ? r + m : r;
}

}

RationalAngle RationalAngle::make(std::int64_t p, std::int64_t q) {
    if (q <= 0 || p <= 0 || p >= q)
        throw std::invalid_argument("angle numerator/denominator must satisfy 0 < p < q");
    const std::int64_t g = std::gcd(p, q);
    RationalAngle a;
    a.p = p / g;
    a.q = q / g;
    return a;
}

double RationalAngle::theta() const {
    return M_PI * static_cast<double>(p) / static_cast<double>(q);
}

double RationalAngle::x() const { return x_extended().first; }

std::pair<double, double> RationalAngle::x_extended() const {
    const long double pi_l = acosl(-1.0L);
    const long double c = cosl(pi_l * static_cast<long double>(p) / static_cast<long double>(q));
    const double hi = static_cast<double>(c);
    const double lo = static_cast<double>(c - static_cast<long double>(hi));
    return {hi, lo};
}

double dist_to_nearest_int(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("argument must be finite");
    const double d = std::abs(x - std::nearbyint(x));
    return std::min(d, 0.5);
}

double phase_gap(const RationalAngle& angle, const OrderParam& lambda) {
    const std::int64_t p = angle.p, q = angle.q;
    if (lambda.has_exact) {
        // the argument at n is A_n / (2qv) with
        // A_n = u(2p - q) + v(2pn - q), all integer
        const i128 u = lambda.num, v = lambda.den;
        const i128 period = i128(2) * q * v;
        i128 best = period;  // larger than any distance
        for (std::int64_t n = 1; n <= q; ++n) {
            const i128 a = u * (2 * p - q) + v * (i128(2) * p * n - q);
            const i128 r = mod_pos(a, period);
            best = std::min(best, std::min(r, period - r));
        }
        return static_cast<double>(best) / static_cast<double>(period);
    }
    const double lam = lambda.value;
    double best = 0.5;
    for (std::int64_t n = 1; n <= q; ++n) {
        const double arg = (n + lam) * p / static_cast<double>(q) - (lam + 1.0) / 2.0;
        best = std::min(best, dist_to_nearest_int(arg));
    }
    return best;
}

std::optional<int> divisibility_obstruction(const RationalAngle& angle,
                                            const OrderParam& lambda) {
    const std::int64_t p = angle.p, q = angle.q;
    // lambda (2p - q) + 2np - q is an integer iff lambda (2p - q) is
    i128 head;  // that integer, when it exists
    if (lambda.has_exact) {
        const i128 num = i128(lambda.num) * (2 * p - q);
        if (num % lambda.den != 0) return std::nullopt;
        head = num / lambda.den;
    } else {
        const double v = lambda.value * (2.0 * p - q);
        const double r = std::nearbyint(v);
        if (std::abs(v - r) > 1e-12) return std::nullopt;
        head = static_cast<i128>(static_cast<long long>(r));
    }
    for (std::int64_t n = 1; n <= q; ++n) {
        const i128 expr = head + i128(2) * n * p - q;
        if (mod_pos(expr, i128(2) * q) == 0) return static_cast<int>(n);
    }
    return std::nullopt;
}

ContinuedFraction continued_fraction(double alpha, int depth) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("expansion requires an argument in (0,1)");
    if (depth < 1) throw std::invalid_argument("depth must be positive");

    constexpr int kMaxDepth = 60;
    constexpr double kDenominatorHorizon = 67108864.0;  // 2^26
    ContinuedFraction cf;
    const int want = std::min(depth, kMaxDepth);
    if (depth > kMaxDepth) cf.precision_exhausted = true;

    double y = alpha;
    double den_prev = 0.0, den_cur = 1.0;  // convergent denominators
    for (int k = 0; k < want; ++k) {
        const double inv = 1.0 / y;
        double a = std::floor(inv);
        double frac = inv - a;
        // a tail quotient beyond 1e9 carries no double information:
        // treat the expansion as terminated exactly
        if (a >= 1e9) {
            cf.value_is_rational = true;
            cf.precision_exhausted = false;
            break;
        }
        cf.terms.push_back(static_cast<std::int64_t>(a));
        const double den_next = a * den_cur + den_prev;
        den_prev = den_cur;
        den_cur = den_next;
        if (frac <= 1e-12) {
            cf.value_is_rational = true;
            cf.precision_exhausted = false;
            break;
        }
        if (den_cur > kDenominatorHorizon) {
            if (k + 1 < want) cf.precision_exhausted = true;
            break;
        }
        y = frac;
    }
    return cf;
}

std::optional<RationalAngle> recognize_rational_angle(double x, std::int64_t q_max,
                                                      double tol) {
    if (!(x > -1.0 && x < 1.0)) throw std::invalid_argument("argument must lie in (-1,1)");
    if (tol < 1e-14) throw std::invalid_argument("tolerance below 1e-14 is not resolvable");
    if (q_max < 2 || q_max > 1000000)
        throw std::invalid_argument("denominator bound must lie in [2, 10^6]");

    const double alpha = std::acos(x) / M_PI;
    ContinuedFraction cf;
    try {
        cf = continued_fraction(alpha, 60);
    } catch (const std::invalid_argument&) {
        return std::nullopt;  // alpha at the boundary of (0,1)
    }

    // gather convergents and mediants with denominator <= q_max
    std::vector<std::pair<std::int64_t, std::int64_t>> candidates;
    std::int64_t p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    std::int64_t p_cur = 0, q_cur = 1;    // p_0/q_0 (alpha in (0,1) has a_0 = 0)
    for (std::int64_t a : cf.terms) {
        bool overflowed = false;
        for (std::int64_t j = 1; j <= a; ++j) {
            const std::int64_t pm = j * p_cur + p_prev;
            const std::int64_t qm = j * q_cur + q_prev;
            if (qm > q_max) {
                overflowed = true;
                break;
            }
            if (pm >= 1 && pm < qm) candidates.emplace_back(pm, qm);
        }
        const std::int64_t p_next = a * p_cur + p_prev;
        const std::int64_t q_next = a * q_cur + q_prev;
        if (overflowed || q_next > q_max) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& lhs, const auto& rhs) { return lhs.second < rhs.second; });

    const long double pi_l = acosl(-1.0L);
    for (const auto& [p, q] : candidates) {
        const double cand =
            static_cast<double>(cosl(pi_l * static_cast<long double>(p) / q));
        if (std::abs(x - cand) <= tol) return RationalAngle::make(p, q);
    }
    return std::nullopt;
}

}
