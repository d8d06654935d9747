#include "gegenbad/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gegenbad {

namespace {

// n-independent part of the scan zero tolerance: 1e-9 relative to the
// asymptotic envelope n^(lambda-1) / ((sin theta)^lambda 2^(lambda-1) Gamma(lambda))
double zero_tolerance_prefactor(const OrderParam& lambda, double theta) {
    const double lam = lambda.value;
    return 1e-9 / (std::pow(std::sin(theta), lam) * std::pow(2.0, lam - 1.0) *
                   std::tgamma(lam));
}

}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::GegenbadlyApproximable: return "GegenbadlyApproximable";
        case Verdict::FailsOddLambda: return "FailsOddLambda";
        case Verdict::FailsConditionI: return "FailsConditionI";
        case Verdict::FailsConditionII: return "FailsConditionII";
        case Verdict::RootBelowThreshold: return "RootBelowThreshold";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

double n_threshold(const RationalAngle& angle, const OrderParam& lambda,
                   bool* info_absolute_value_extension) {
    if (info_absolute_value_extension)
        *info_absolute_value_extension = 2 * angle.p >= angle.q;
    const double lam = lambda.value;
    // the prefactor lambda |1-lambda| vanishes: every degree is past the bound
    if (lam == 1.0) return 0.0;
    const double X = phase_gap(angle, lambda);
    if (X == 0.0) throw std::domain_error("no threshold exists (condition fails)");
    const double cot = std::abs(1.0 / std::tan(angle.theta()));
    return (M_PI / 2.0) * lam * std::abs(1.0 - lam) * cot / X;
}

Certificate certify(const RationalAngle& angle, const OrderParam& lambda,
                    std::optional<int> n_max_override) {
    // raising the floor from the obvious 32 keeps the certified constant
    // tight against the tail of the scaled sequence (within 1% of the
    // minimum over a 10x longer window for every worked example)
    constexpr int kScanFloor = 160;

    Certificate cert;
    cert.angle = angle;
    cert.lambda = lambda;
    cert.phase_gap_X = phase_gap(angle, lambda);

    if (lambda.is_odd_integer() && lambda.value != 1.0) {
        cert.verdict = Verdict::FailsOddLambda;
        cert.note = "no gegenbadly approximable points exist at odd integer orders >= 3";
        return cert;
    }

    if (auto witness = divisibility_obstruction(angle, lambda)) {
        cert.verdict = Verdict::FailsConditionII;
        cert.witness_n = *witness;
        if (lambda.value == 1.0)
            cert.note = "order 1 with a rational angle: sin((n+1) theta) vanishes at n = " +
                        std::to_string(*witness);
        else
            cert.note = "divisibility obstruction at n = " + std::to_string(*witness);
        return cert;
    }

    cert.n_threshold =
        n_threshold(angle, lambda, &cert.threshold_absolute_value_extension);
    const int n_scan = std::max({static_cast<int>(std::ceil(cert.n_threshold)), kScanFloor,
                                 n_max_override.value_or(0)});

    const double theta = angle.theta();
    const auto [x_hi, x_lo] = angle.x_extended();
    const double tol_prefactor = zero_tolerance_prefactor(lambda, theta);
    cert.zero_tolerance_used = tol_prefactor;

    const auto seq = gegenbauer_sequence(n_scan, lambda, x_hi);
    double min_scaled = HUGE_VAL;
    for (int n = 1; n <= n_scan; ++n) {
        const double abs_scaled = std::abs(seq.entries[n].scaled);
        min_scaled = std::min(min_scaled, abs_scaled);
        const double tol = tol_prefactor * std::pow(static_cast<double>(n), lambda.value - 1.0);
        if (std::abs(seq.entries[n].value) < tol) {
            // re-check with twice the mantissa before declaring a root
            const auto [hi, lo] = gegenbauer_eval_extended(n, lambda, x_hi, x_lo);
            if (std::abs(hi + lo) < tol) {
                cert.verdict = Verdict::RootBelowThreshold;
                cert.witness_n = n;
                cert.checked_up_to = n;
                cert.empirical_c = min_scaled;
                cert.note = "scaled value at n = " + std::to_string(n) +
                            " below zero tolerance; confirmed in extended precision";
                return cert;
            }
        }
    }

    cert.verdict = Verdict::GegenbadlyApproximable;
    cert.checked_up_to = n_scan;
    cert.empirical_c = min_scaled;
    return cert;
}

ScanResult scan_sequence_min(double x, const OrderParam& lambda, int n_max) {
    if (n_max < 1) throw std::invalid_argument("scan length must be positive");
    const auto seq = gegenbauer_sequence(n_max, lambda, x);
    ScanResult result{HUGE_VAL, 0};
    for (int n = 1; n <= n_max; ++n) {
        const double abs_scaled = std::abs(seq.entries[n].scaled);
        if (abs_scaled < result.min_scaled) {
            result.min_scaled = abs_scaled;
            result.argmin_n = n;
        }
    }
    return result;
}

QuadraticClassification classify_quadratic(std::int64_t a, std::int64_t b) {
    if (b <= 0) throw std::domain_error("square denominator must be positive");
    if (a < 0 || a > b) throw std::domain_error("square must lie in [0,1]");
    const std::int64_t g = std::gcd(a, b);
    a /= g;
    b /= g;

    QuadraticClassification out{QuadraticClass::NotRationalAngle, std::nullopt, std::nullopt};
    if (a == 1 && b == 1) {
        out.kind = QuadraticClass::BoundaryExcluded;
        return out;
    }
    if (a == 0) {
        // x = 0 = cos(pi/2): condition (ii) fails for every order
        out.kind = QuadraticClass::InVaronaSetButObstructed;
        out.lambda = OrderParam::from_rational(3, 2);
        out.certificate = certify(RationalAngle::make(1, 2), *out.lambda);
        return out;
    }
    struct Entry {
        std::int64_t a, b, p, q, u, v;
    };
    // x^2 in {1/4, 1/2, 3/4} are the only interior cosines of rational
    // angles with rational square; each carries its witnessing order
    static const Entry table[] = {
        {1, 4, 1, 3, 3, 2},
        {1, 2, 1, 4, 3, 2},
        {3, 4, 1, 6, 4, 3},
    };
    for (const auto& e : table) {
        if (a == e.a && b == e.b) {
            out.kind = QuadraticClass::InVaronaSet;
            out.lambda = OrderParam::from_rational(e.u, e.v);
            out.certificate = certify(RationalAngle::make(e.p, e.q), *out.lambda);
            return out;
        }
    }
    return out;
}

double find_lambda_root(int n, const RationalAngle& angle, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("empty bracket");
    const double x = angle.x();
    auto f = [&](double lam) { return gegenbauer_eval(n, OrderParam::from_real(lam), x); };
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw std::domain_error("not bracketed");
    // run the bracket down to adjacent doubles; the residual at the
    // returned point is then limited only by evaluation noise
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}
