#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace gegenbad {

// The Gegenbauer order parameter. Kept exact when constructed from a
// rational so divisibility and parity questions downstream have crisp
// answers; the floating value is authoritative for evaluation.
struct OrderParam {
    double value = 0.0;
    bool has_exact = false;
    std::int64_t num = 0;  // reduced, den > 0, num/den == value
    std::int64_t den = 1;

    static OrderParam from_real(double v);
    static OrderParam from_rational(std::int64_t u, std::int64_t v);

    // True iff the order is 1, 3, 5, ... (exact when rational, else
    // within absolute tolerance 1e-12).
    bool is_odd_integer() const;
    bool is_integer() const;
};

// Sign and log-magnitude pair for quantities whose magnitude outgrows
// double range (binomials, Rodrigues constants, C_n at the endpoint).
struct ScaledValue {
    int sign = 0;          // -1, 0, +1
    double log_abs = 0.0;  // natural log of |value|; meaningful iff sign != 0

    double to_double() const;
};

struct GegenEntry {
    int n;
    double value;   // C_n^lambda(x)
    double scaled;  // value / n^(lambda-1) for n >= 1; equals value at n = 0
};

struct GegenSequence {
    OrderParam lambda;
    double x = 0.0;
    std::vector<GegenEntry> entries;  // contiguous n = 0..n_max
};

// C_n^lambda(x) by the forward three-term recurrence. Throws
// std::overflow_error("magnitude out of range") if the value leaves
// double range; use gegenbauer_eval_scaled then.
double gegenbauer_eval(int n, const OrderParam& lambda, double x);

// Same recurrence with periodic renormalization (rescale when the
// running magnitude passes 2^512, accumulating the exponent), so the
// result is finite for any n.
ScaledValue gegenbauer_eval_scaled(int n, const OrderParam& lambda, double x);

// One forward pass producing C_0..C_n_max together with the scaled
// column C_n / n^(lambda-1). Cost O(n_max).
GegenSequence gegenbauer_sequence(int n_max, const OrderParam& lambda, double x);

// C_n^lambda(1) = Gamma(n+2 lambda) / (Gamma(2 lambda) n!) via log-gamma;
// always positive.
ScaledValue gegenbauer_at_one(int n, const OrderParam& lambda);

// Orthogonality normalization
//   pi 2^(1-2 lambda) / Gamma(lambda)^2 * Gamma(n+2 lambda) / (n! (n+lambda)).
double squared_norm(int n, const OrderParam& lambda);

// Rodrigues prefactor
//   a_n = (-1)^n / (2^n n!) * Gamma(lambda+1/2) Gamma(n+2 lambda)
//                           / (Gamma(2 lambda) Gamma(lambda+n+1/2))
// as sign plus log-magnitude.
ScaledValue rodrigues_constant(int n, const OrderParam& lambda);

struct KtEnvelope {
    double main;               // oscillatory leading term
    double error_bound_shape;  // n^(lambda-2) / (sin theta)^(lambda+1), constant-free
};

// Leading asymptotic envelope
//   main = n^(lambda-1) / (2^(lambda-1) Gamma(lambda)) *
//          (sin theta)^(-lambda) * cos((n+lambda) theta - lambda pi/2).
// The residual constant is unknown a priori; callers fit it against
// error_bound_shape. Requires n sin(theta) >= 1, else throws
// std::domain_error("asymptotic regime not reached").
KtEnvelope kt_envelope(int n, const OrderParam& lambda, double theta);

// Double-double re-evaluation for tie-breaking near roots: returns
// C_n^lambda(x) with roughly twice the mantissa, as an unevaluated
// hi+lo sum. x may be given with a low-order correction (x = x_hi + x_lo)
// when the caller knows it, e.g. from a long double cosine.
std::pair<double, double> gegenbauer_eval_extended(int n, const OrderParam& lambda,
                                                   double x_hi, double x_lo = 0.0);

}
