#pragma once

#include "gegenbad/gegenbauer.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gegenbad {

// A cap height t on the sphere S^d (ambient dimension d+1). The
// associated Gegenbauer order is lambda = (d-1)/2; d = 1 uses the
// lambda -> 0 limit conventions (cosine basis).
struct CapSpec {
    int d = 2;
    double t = 0.0;

    static CapSpec make(int d, double t);  // validates d >= 1, t in (-1,1)

    double lambda() const { return (d - 1) / 2.0; }
    double lambda_plus() const { return (d + 1) / 2.0; }
    // Theorem-3-style hypotheses exclude d = 1 mod 4; callers surface
    // this as a warning, not an error.
    bool dimension_excluded() const { return d % 4 == 1; }
};

struct PointSet {
    int d = 2;
    std::vector<std::vector<double>> points;  // unit vectors in R^(d+1)

    int size() const { return static_cast<int>(points.size()); }
};

struct CoefficientTable {
    CapSpec cap;
    std::vector<std::pair<int, double>> entries;  // contiguous n = 1..n_max
};

enum class DiscrepancyMethod { Spectral, MonteCarlo, Floor };

struct DiscrepancyReport {
    DiscrepancyMethod method = DiscrepancyMethod::Spectral;
    double value = 0.0;
    std::optional<double> stderr_value;   // MonteCarlo only
    std::optional<double> tail_bound;     // Spectral only: truncation error bound
    CapSpec cap;
    int n_points = 0;
    int n_max = 0;        // Spectral
    long long samples = 0; // MonteCarlo
    std::uint64_t seed = 0;
    int floor_K = 0;       // Floor
};

// Normalized surface measure of the cap {y : x.y >= t}:
//   (Gamma((d+1)/2) / (sqrt(pi) Gamma(d/2))) int_t^1 (1-s^2)^(d/2-1) ds,
// evaluated through the regularized incomplete beta function.
double cap_measure(int d, double t);

// Closed form for int_alpha^1 C_n^lambda(t) (1-t^2)^(lambda-1/2) dt:
//   -(a_n^lambda / a_{n-1}^{lambda+1}) (1-alpha^2)^(lambda+1/2) C_{n-1}^{lambda+1}(alpha)
// with the Rodrigues-constant ratio taken in log domain.
double cap_integral_closed(int n, const OrderParam& lambda, double alpha);

// Gegenbauer coefficient of the cap indicator:
//   fhat(n) = Gamma(lambda+1) / (Gamma(lambda+1/2) Gamma(1/2)) *
//             cap_integral_closed(n, lambda, t) / C_n^lambda(1).
// d = 1 uses the cosine-basis limit sin(n arccos t) / (n pi).
double cap_coefficient(int n, const CapSpec& cap);

CoefficientTable coefficient_table(const CapSpec& cap, int n_max);
void write_coefficient_csv(std::ostream& out, const CoefficientTable& table);

// min over 1 <= k <= K = ceil(kappa * n_points^(1/d)) of fhat(k)^2; the
// kappa parameter stands in for the unknown dimensional constant.
DiscrepancyReport bilyk_dai_floor(const CapSpec& cap, long long n_points, double kappa);

// Truncated spectral expansion
//   sum_{n=1}^{n_max} fhat(n)^2 ((n+lambda)/lambda) (1/N^2) sum_{i,j} C_n(z_i.z_j)
// plus the tail bound sum_{n>n_max} fhat(n)^2 ((n+lambda)/lambda) C_n(1).
// d = 1 replaces the zonal factor by its limit value 2 and C_n by cos(n.).
// Throws std::invalid_argument on dimension mismatch.
DiscrepancyReport spectral_discrepancy(const PointSet& Z, const CapSpec& cap, int n_max);

int default_spectral_n_max(const CapSpec& cap, int n_points);

// Mean of (empirical proportion - cap measure)^2 over `samples` uniform
// cap centers from the counter-based stream; stderr of the mean is
// reported. samples >= 1000 required.
DiscrepancyReport monte_carlo_discrepancy(const PointSet& Z, const CapSpec& cap,
                                          long long samples, std::uint64_t seed);

// Trapezoid rule over t in [-1,1] of the Monte Carlo single-radius
// values on a grid of t_grid_size nodes (>= 8 required).
double full_cap_discrepancy(const PointSet& Z, int t_grid_size, long long samples,
                            std::uint64_t seed);

enum class PointSetKind { Random, Fibonacci, Equispaced };

// random: i.i.d. uniform via normalized Gaussians, any d >= 1;
// fibonacci: spherical Fibonacci lattice, d = 2 only (else throws
// std::invalid_argument("unsupported"));
// equispaced: N-th roots of unity, d = 1 only.
PointSet generate_pointset(PointSetKind kind, int N, int d, std::uint64_t seed);

// Text format: header "d N", then N lines of d+1 coordinates. The
// loader re-normalizes rows within 1e-9 of unit length and rejects the
// rest.
PointSet load_pointset(std::istream& in);
void save_pointset(std::ostream& out, const PointSet& Z);

}
