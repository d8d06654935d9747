#include "gegenbad/gegenbauer.hpp"

#include "gegenbad/detail/double_double.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gegenbad {

namespace {

constexpr double kRenormThreshold = 1.3407807929942597e154;  // 2^512
constexpr double kRenormFactor = 7.458340731200207e-155;     // 2^-512
constexpr double kLogRenorm = 354.89135644669199;            // 512 ln 2

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}

OrderParam OrderParam::from_real(double v) {
    if (!(v > 0.0)) throw std::invalid_argument("order parameter must be positive");
    OrderParam p;
    p.value = v;
    return p;
}

OrderParam OrderParam::from_rational(std::int64_t u, std::int64_t v) {
    if (v == 0) throw std::invalid_argument("order parameter denominator is zero");
    if (v < 0) {
        u = -u;
        v = -v;
    }
    if (u <= 0) throw std::invalid_argument("order parameter must be positive");
    const std::int64_t g = std::gcd(u, v);
    OrderParam p;
    p.num = u / g;
    p.den = v / g;
    p.has_exact = true;
    p.value = static_cast<double>(p.num) / static_cast<double>(p.den);
    return p;
}

bool OrderParam::is_integer() const {
    if (has_exact) return den == 1;
    return std::abs(value - std::round(value)) < 1e-12;
}

bool OrderParam::is_odd_integer() const {
    if (!is_integer()) return false;
    const std::int64_t k = has_exact ? num : static_cast<std::int64_t>(std::llround(value));
    return k % 2 == 1;
}

double ScaledValue::to_double() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_abs);
}

double gegenbauer_eval(int n, const OrderParam& lambda, double x) {
    if (n < 0) throw std::invalid_argument("degree must be nonnegative");
    const double lam = lambda.value;
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * lam * x;
    for (int k = 2; k <= n; ++k) {
        double next = ((k + lam - 1.0) * 2.0 * x * cur - (k + 2.0 * lam - 2.0) * prev) / k;
        if (!std::isfinite(next)) throw std::overflow_error("magnitude out of range");
        prev = cur;
        cur = next;
    }
    return cur;
}

ScaledValue gegenbauer_eval_scaled(int n, const OrderParam& lambda, double x) {
    if (n < 0) throw std::invalid_argument("degree must be nonnegative");
    const double lam = lambda.value;
    if (n == 0) return {1, 0.0};
    double prev = 1.0;
    double cur = 2.0 * lam * x;
    double log_scale = 0.0;
    for (int k = 2; k <= n; ++k) {
        double next = ((k + lam - 1.0) * 2.0 * x * cur - (k + 2.0 * lam - 2.0) * prev) / k;
        prev = cur;
        cur = next;
        if (std::max(std::abs(cur), std::abs(prev)) > kRenormThreshold) {
            cur *= kRenormFactor;
            prev *= kRenormFactor;
            log_scale += kLogRenorm;
        }
    }
    if (cur == 0.0) return {0, 0.0};
    return {sign_of(cur), std::log(std::abs(cur)) + log_scale};
}

GegenSequence gegenbauer_sequence(int n_max, const OrderParam& lambda, double x) {
    if (n_max < 1) throw std::invalid_argument("sequence length must be positive");
    const double lam = lambda.value;
    GegenSequence seq;
    seq.lambda = lambda;
    seq.x = x;
    seq.entries.reserve(n_max + 1);
    seq.entries.push_back({0, 1.0, 1.0});

    double prev = 1.0;
    double cur = 2.0 * lam * x;
    double log_scale = 0.0;
    for (int k = 1; k <= n_max; ++k) {
        if (k >= 2) {
            double next =
                ((k + lam - 1.0) * 2.0 * x * cur - (k + 2.0 * lam - 2.0) * prev) / k;
            prev = cur;
            cur = next;
            if (std::max(std::abs(cur), std::abs(prev)) > kRenormThreshold) {
                cur *= kRenormFactor;
                prev *= kRenormFactor;
                log_scale += kLogRenorm;
            }
        }
        double value, scaled;
        if (log_scale == 0.0) {
            value = cur;
            scaled = cur / std::pow(static_cast<double>(k), lam - 1.0);
        } else {
            // value may live above double range even though scaled does not
            const double log_abs = std::log(std::abs(cur)) + log_scale;
            value = sign_of(cur) * std::exp(log_abs);
            scaled = sign_of(cur) * std::exp(log_abs - (lam - 1.0) * std::log(k));
        }
        if (!std::isfinite(value)) throw std::overflow_error("magnitude out of range");
        seq.entries.push_back({k, value, scaled});
    }
    return seq;
}

ScaledValue gegenbauer_at_one(int n, const OrderParam& lambda) {
    if (n < 0) throw std::invalid_argument("degree must be nonnegative");
    const double lam = lambda.value;
    const double log_abs =
        std::lgamma(n + 2.0 * lam) - std::lgamma(2.0 * lam) - std::lgamma(n + 1.0);
    return {1, log_abs};
}

double squared_norm(int n, const OrderParam& lambda) {
    if (n < 0) throw std::invalid_argument("degree must be nonnegative");
    const double lam = lambda.value;
    const double log_value = std::log(M_PI) + (1.0 - 2.0 * lam) * std::log(2.0) -
                             2.0 * std::lgamma(lam) + std::lgamma(n + 2.0 * lam) -
                             std::lgamma(n + 1.0) - std::log(n + lam);
    return std::exp(log_value);
}

ScaledValue rodrigues_constant(int n, const OrderParam& lambda) {
    if (n < 0) throw std::invalid_argument("degree must be nonnegative");
    const double lam = lambda.value;
    const double log_abs = -n * std::log(2.0) - std::lgamma(n + 1.0) +
                           std::lgamma(lam + 0.5) + std::lgamma(n + 2.0 * lam) -
                           std::lgamma(2.0 * lam) - std::lgamma(lam + n + 0.5);
    return {n % 2 == 0 ? 1 : -1, log_abs};
}

KtEnvelope kt_envelope(int n, const OrderParam& lambda, double theta) {
    const double s = std::sin(theta);
    if (!(n * s >= 1.0)) throw std::domain_error("asymptotic regime not reached");
    const double lam = lambda.value;
    const double log_amp = (lam - 1.0) * std::log(static_cast<double>(n)) -
                           (lam - 1.0) * std::log(2.0) - std::lgamma(lam) -
                           lam * std::log(s);
    const double phase = (n + lam) * theta - lam * M_PI / 2.0;
    KtEnvelope env;
    env.main = std::exp(log_amp) * std::cos(phase);
    env.error_bound_shape = std::pow(static_cast<double>(n), lam - 2.0) /
                            std::pow(s, lam + 1.0);
    return env;
}

std::pair<double, double> gegenbauer_eval_extended(int n, const OrderParam& lambda,
                                                   double x_hi, double x_lo) {
    using detail::DD;
    if (n < 0) throw std::invalid_argument("degree must be nonnegative");
    const DD x = detail::dd_normalize(x_hi, x_lo);
    if (n == 0) return {1.0, 0.0};

    DD cur;
    if (lambda.has_exact) {
        cur = detail::dd_mul(
            x, detail::dd_div(detail::dd_from(2.0 * static_cast<double>(lambda.num)),
                              detail::dd_from(static_cast<double>(lambda.den))));
    } else {
        cur = detail::dd_mul(x, 2.0 * lambda.value);
    }
    DD prev = detail::dd_from(1.0);
    for (int k = 2; k <= n; ++k) {
        DD a, b;
        if (lambda.has_exact) {
            // coefficient numerators stay integer-exact in double range
            const double den_k = static_cast<double>(lambda.den) * k;
            const double a_num =
                2.0 * (static_cast<double>(lambda.den) * (k - 1) + lambda.num);
            const double b_num =
                static_cast<double>(lambda.den) * (k - 2) + 2.0 * lambda.num;
            a = detail::dd_div(detail::dd_from(a_num), detail::dd_from(den_k));
            b = detail::dd_div(detail::dd_from(b_num), detail::dd_from(den_k));
        } else {
            const DD kk = detail::dd_from(static_cast<double>(k));
            a = detail::dd_div(
                detail::dd_mul(detail::dd_add(detail::dd_from(k - 1.0),
                                              detail::dd_from(lambda.value)),
                               2.0),
                kk);
            b = detail::dd_div(detail::dd_add(detail::dd_from(k - 2.0),
                                              detail::dd_from(2.0 * lambda.value)),
                               kk);
        }
        DD next = detail::dd_sub(detail::dd_mul(detail::dd_mul(a, x), cur),
                                 detail::dd_mul(b, prev));
        prev = cur;
        cur = next;
    }
    return {cur.hi, cur.lo};
}

}
