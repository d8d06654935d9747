#include "gegenbad/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace gegenbad {

namespace {

// Local three-term recurrence, deliberately self-contained so the
// quadrature oracle does not depend on the library's own evaluator.
double gegen_rec(int n, double lambda, double x) {
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * lambda * x;
    for (int k = 2; k <= n; ++k) {
        double next = ((k + lambda - 1.0) * 2.0 * x * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    return cur;
}

}

QuadratureRule gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("quadrature order must be positive");
    QuadratureRule rule;
    rule.nodes.assign(order, 0.0);
    rule.weights.assign(order, 0.0);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-angle initial guess for the i-th root of P_order.
        double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 64; ++iter) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            deriv = order * (z * p1 - p0) / (z * z - 1.0);
            double step = p1 / deriv;
            z -= step;
            if (std::abs(step) < 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[order - 1 - i] = z;
        double w = 2.0 / ((1.0 - z * z) * deriv * deriv);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[half - 1] = 0.0;
    return rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f,
                 double a, double b) {
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + rad * rule.nodes[i]);
    return rad * sum;
}

double weighted_tail_integral(int n, double lambda, double alpha) {
    // t = cos(phi): the weight (1-t^2)^(lambda-1/2) absorbs the Jacobian
    // and becomes (sin phi)^(2 lambda), removing the endpoint singularity.
    const double phi_max = std::acos(alpha);
    const int order = std::max(64, 4 * n);
    const QuadratureRule rule = gauss_legendre(order);
    auto g = [&](double phi) {
        double s = std::sin(phi);
        return gegen_rec(n, lambda, std::cos(phi)) * std::pow(s, 2.0 * lambda);
    };
    return integrate(rule, g, 0.0, phi_max);
}

double weighted_product_integral(int n, int m, double lambda) {
    const int order = std::max(64, 2 * (n + m) + 32);
    const QuadratureRule rule = gauss_legendre(order);
    auto g = [&](double phi) {
        double c = std::cos(phi);
        double s = std::sin(phi);
        return gegen_rec(n, lambda, c) * gegen_rec(m, lambda, c) * std::pow(s, 2.0 * lambda);
    };
    return integrate(rule, g, 0.0, M_PI);
}

}
