#pragma once

#include "gegenbad/diophantine.hpp"
#include "gegenbad/gegenbauer.hpp"

#include <optional>
#include <string>

namespace gegenbad {

enum class Verdict {
    GegenbadlyApproximable,
    FailsOddLambda,
    FailsConditionI,
    FailsConditionII,
    RootBelowThreshold,
    Inconclusive,
};

const char* verdict_name(Verdict v);

struct Certificate {
    RationalAngle angle;
    OrderParam lambda;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<int> witness_n;    // set for FailsConditionII / RootBelowThreshold
    double phase_gap_X = 0.0;
    double n_threshold = 0.0;
    int checked_up_to = 0;
    double empirical_c = 0.0;        // min over 1..checked_up_to of |C_n|/n^(lambda-1)
    double zero_tolerance_used = 0.0;
    bool threshold_absolute_value_extension = false;  // p/q >= 1/2, |cot| used
    std::string note;                // human-readable context for failure verdicts
};

// The effective bound N = (pi/2) lambda |1-lambda| |cot(pi p/q)| / X with
// X the phase gap; 0 when lambda = 1 (prefactor vanishes). X = 0 throws
// std::domain_error("no threshold exists (condition fails)").
// info_absolute_value_extension, when non-null, reports whether the
// p/q >= 1/2 extension via |cot| was exercised.
double n_threshold(const RationalAngle& angle, const OrderParam& lambda,
                   bool* info_absolute_value_extension = nullptr);

// Full decision pipeline: odd-integer order, then the divisibility
// obstruction, then the threshold and a root scan up to
// max(ceil(threshold), scan floor, n_max_override).
Certificate certify(const RationalAngle& angle, const OrderParam& lambda,
                    std::optional<int> n_max_override = std::nullopt);

struct ScanResult {
    double min_scaled = 0.0;
    int argmin_n = 0;
};

// min over 1 <= n <= n_max of |C_n(x)| / n^(lambda-1), with the argmin.
ScanResult scan_sequence_min(double x, const OrderParam& lambda, int n_max);

enum class QuadraticClass {
    InVaronaSet,
    InVaronaSetButObstructed,
    BoundaryExcluded,
    NotRationalAngle,
};

struct QuadraticClassification {
    QuadraticClass kind;
    std::optional<OrderParam> lambda;       // witnessing order for InVaronaSet
    std::optional<Certificate> certificate; // its certificate
};

// Classifies x with x^2 = a/b exactly: cos(pi p/q) has rational square
// only for x^2 in {0, 1/4, 1/2, 3/4, 1}; members get a witnessing
// certificate (3/2 for 1/4 and 1/2, 4/3 for 3/4), x = 0 is obstructed,
// x^2 = 1 sits on the boundary. Throws std::domain_error outside [0,1].
QuadraticClassification classify_quadratic(std::int64_t a, std::int64_t b);

// Bisection in lambda for a root of C_n^lambda(cos(pi p/q)), run to
// bracket exhaustion so the residual is as small as double permits.
// Requires a sign change over [lo, hi]; otherwise throws
// std::domain_error("not bracketed").
double find_lambda_root(int n, const RationalAngle& angle, double lo, double hi);

}
