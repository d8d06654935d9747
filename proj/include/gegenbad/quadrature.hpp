#pragma once

#include <functional>
#include <vector>

namespace gegenbad {

// Gauss-Legendre rule on [-1,1]. Nodes are the Legendre roots found by
// Newton iteration from Chebyshev initial guesses; exact for polynomials
// of degree <= 2*order - 1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int order);

// Integrates f over [a,b] by affine transplantation of the rule.
double integrate(const QuadratureRule& rule, const std::function<double(double)>& f,
                 double a, double b);

// High-accuracy reference for the weighted tail integral
//   int_alpha^1 C_n^lambda(t) (1-t^2)^(lambda-1/2) dt.
// Substituting t = cos(phi) turns the integrand into
// C_n(cos phi) * (sin phi)^(2 lambda), which is a trigonometric polynomial
// whenever 2*lambda is an integer, so the rule converges spectrally there
// instead of stalling on the endpoint square-root singularity of the raw
// weight. Order grows with n.
double weighted_tail_integral(int n, double lambda, double alpha);

// Same substitution over the full interval:
//   int_{-1}^1 C_n^lambda(t) C_m^lambda(t) (1-t^2)^(lambda-1/2) dt.
double weighted_product_integral(int n, int m, double lambda);

}
