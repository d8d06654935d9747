#include "gegenbad/cap_discrepancy.hpp"

#include "gegenbad/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace gegenbad {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// Disjoint counter substreams so that point generation and cap-center
// sampling never consume the same words even under a shared user seed.
constexpr std::uint64_t kPointStream = 1;
constexpr std::uint64_t kCenterStream = 2;

// Continued fraction for the regularized incomplete beta, modified
// Lentz scheme.
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h;
}

double regularized_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

void validate_points(const PointSet& Z) {
    if (Z.d < 1) throw std::invalid_argument("dimension must be positive");
    if (Z.points.empty()) throw std::invalid_argument("empty point set");
    for (const auto& p : Z.points) {
        if (static_cast<int>(p.size()) != Z.d + 1)
            throw std::invalid_argument("coordinate count mismatch");
        double norm2 = 0.0;
        for (double c : p) norm2 += c * c;
        if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-12)
            throw std::invalid_argument("point norm out of tolerance");
    }
}

int thread_count() {
    const char* env = std::getenv("GEGENBAD_THREADS");
    if (env == nullptr) return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) return 1;
    return static_cast<int>(std::min(v, 64L));
}

// Fixed-shape pairwise reduction: the result depends only on the vector
// contents, never on how the entries were produced.
double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v, 0, v.size()); }

void run_striped(int workers, const std::function<void(int)>& body) {
    if (workers <= 1) {
        body(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& th : pool) th.join();
}

}

CapSpec CapSpec::make(int d, double t) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (!(t > -1.0 && t < 1.0))
        throw std::invalid_argument("cap height must lie strictly inside (-1,1)");
    CapSpec cap;
    cap.d = d;
    cap.t = t;
    return cap;
}

double cap_measure(int d, double t) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (!(t >= -1.0 && t <= 1.0)) throw std::invalid_argument("cap height outside [-1,1]");
    if (t <= -1.0) return 1.0;
    if (t >= 1.0) return 0.0;
    if (d == 1) return std::acos(t) / kPi;
    if (d == 2) return 0.5 * (1.0 - t);
    if (t < 0.0) return 1.0 - cap_measure(d, -t);
    return 0.5 * (1.0 - regularized_beta(0.5, 0.5 * d, t * t));
}

double cap_integral_closed(int n, const OrderParam& lambda, double alpha) {
    if (n < 1) throw std::invalid_argument("degree must be positive");
    if (!(alpha >= -1.0 && alpha <= 1.0)) throw std::invalid_argument("alpha outside [-1,1]");
    if (alpha == 1.0 || alpha == -1.0) return 0.0;
    const OrderParam lam_plus = lambda.has_exact
                                    ? OrderParam::from_rational(lambda.num + lambda.den, lambda.den)
                                    : OrderParam::from_real(lambda.value + 1.0);
    // -a_n^lambda / a_{n-1}^{lambda+1}; the signs always cancel to +1
    const ScaledValue an = rodrigues_constant(n, lambda);
    const ScaledValue am = rodrigues_constant(n - 1, lam_plus);
    const double ratio = -(an.sign * am.sign) * std::exp(an.log_abs - am.log_abs);
    const double power = std::pow(1.0 - alpha * alpha, lambda.value + 0.5);
    return ratio * power * gegenbauer_eval(n - 1, lam_plus, alpha);
}

double cap_coefficient(int n, const CapSpec& cap) {
    if (n < 1) throw std::invalid_argument("degree must be positive");
    if (cap.d == 1) {
        // cosine-basis limit on the circle
        return std::sin(n * std::acos(cap.t)) / (n * kPi);
    }
    const OrderParam lam = OrderParam::from_rational(cap.d - 1, 2);
    const double integral = cap_integral_closed(n, lam, cap.t);
    if (integral == 0.0) return 0.0;
    const double log_const =
        std::lgamma(lam.value + 1.0) - std::lgamma(lam.value + 0.5) - std::lgamma(0.5);
    const ScaledValue one = gegenbauer_at_one(n, lam);
    const double sign = (integral > 0.0 ? 1.0 : -1.0) * one.sign;
    return sign * std::exp(log_const + std::log(std::fabs(integral)) - one.log_abs);
}

CoefficientTable coefficient_table(const CapSpec& cap, int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be positive");
    CoefficientTable table;
    table.cap = cap;
    table.entries.reserve(n_max);
    if (cap.d == 1) {
        const double theta = std::acos(cap.t);
        for (int n = 1; n <= n_max; ++n)
            table.entries.emplace_back(n, std::sin(n * theta) / (n * kPi));
        return table;
    }
    // one recurrence pass at order lambda+1 serves every degree
    const OrderParam lam = OrderParam::from_rational(cap.d - 1, 2);
    const OrderParam lam_plus = OrderParam::from_rational(cap.d + 1, 2);
    const GegenSequence seq = gegenbauer_sequence(n_max - 1, lam_plus, cap.t);
    const double log_const =
        std::lgamma(lam.value + 1.0) - std::lgamma(lam.value + 0.5) - std::lgamma(0.5);
    const double log_power = (lam.value + 0.5) * std::log1p(-cap.t * cap.t);
    for (int n = 1; n <= n_max; ++n) {
        const double c = seq.entries[n - 1].value;
        if (c == 0.0) {
            table.entries.emplace_back(n, 0.0);
            continue;
        }
        const ScaledValue an = rodrigues_constant(n, lam);
        const ScaledValue am = rodrigues_constant(n - 1, lam_plus);
        const ScaledValue one = gegenbauer_at_one(n, lam);
        const double sign =
            static_cast<double>(-(an.sign * am.sign) * one.sign) * (c > 0.0 ? 1.0 : -1.0);
        table.entries.emplace_back(
            n, sign * std::exp(log_const + an.log_abs - am.log_abs + log_power +
                               std::log(std::fabs(c)) - one.log_abs));
    }
    return table;
}

void write_coefficient_csv(std::ostream& out, const CoefficientTable& table) {
    out << "n,fhat\n" << std::setprecision(17);
    for (const auto& [n, fhat] : table.entries) out << n << ',' << fhat << '\n';
}

DiscrepancyReport bilyk_dai_floor(const CapSpec& cap, long long n_points, double kappa) {
    if (n_points < 1) throw std::invalid_argument("n_points must be positive");
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    const double raw = kappa * std::pow(static_cast<double>(n_points), 1.0 / cap.d);
    const int K = std::max(1, static_cast<int>(std::ceil(raw)));
    const CoefficientTable table = coefficient_table(cap, K);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [n, fhat] : table.entries) best = std::min(best, fhat * fhat);
    DiscrepancyReport r;
    r.method = DiscrepancyMethod::Floor;
    r.value = best;
    r.cap = cap;
    r.n_points = static_cast<int>(n_points);
    r.floor_K = K;
    return r;
}

int default_spectral_n_max(const CapSpec& cap, int n_points) {
    const double suggested =
        20.0 * std::pow(static_cast<double>(std::max(1, n_points)), 1.0 / cap.d);
    return std::max(400, static_cast<int>(std::ceil(suggested)));
}

DiscrepancyReport spectral_discrepancy(const PointSet& Z, const CapSpec& cap, int n_max) {
    if (Z.d != cap.d) throw std::invalid_argument("dimension mismatch");
    if (n_max < 1) throw std::invalid_argument("n_max must be positive");
    validate_points(Z);
    const int N = Z.size();
    const int dim = cap.d + 1;
    const double lam = cap.lambda();
    const CoefficientTable table = coefficient_table(cap, n_max);

    // mode weights fhat^2 (n+lambda)/lambda; the d = 1 limit of the
    // normalized zonal factor is the constant 2
    std::vector<double> a(n_max + 1, 0.0);
    for (const auto& [n, fhat] : table.entries)
        a[n] = fhat * fhat * (cap.d == 1 ? 2.0 : (n + lam) / lam);

    std::vector<double> alpha(n_max + 1, 2.0), beta(n_max + 1, 1.0);
    if (cap.d != 1)
        for (int n = 2; n <= n_max; ++n) {
            alpha[n] = 2.0 * (n + lam - 1.0) / n;
            beta[n] = (n + 2.0 * lam - 2.0) / n;
        }
    const double c1 = cap.d == 1 ? 1.0 : 2.0 * lam;

    // sum_n a_n C_n(x), streamed off the three-term recurrence
    const auto weighted_kernel = [&](double x) {
        double cm2 = 1.0;
        double cm1 = c1 * x;
        double acc = a[1] * cm1;
        for (int n = 2; n <= n_max; ++n) {
            const double c = alpha[n] * x * cm1 - beta[n] * cm2;
            acc += a[n] * c;
            cm2 = cm1;
            cm1 = c;
        }
        return acc;
    };

    // row-parallel Gram pass: row i owns the pairs (i, j > i) in fixed j
    // order, so the row sums never depend on the worker count
    std::vector<double> row(N, 0.0);
    const int workers = std::min(thread_count(), N);
    run_striped(workers, [&](int w) {
        for (int i = w; i < N; i += workers) {
            const auto& zi = Z.points[i];
            double s = 0.0;
            for (int j = i + 1; j < N; ++j) {
                const auto& zj = Z.points[j];
                double dot = 0.0;
                for (int k = 0; k < dim; ++k) dot += zi[k] * zj[k];
                s += weighted_kernel(dot);
            }
            row[i] = s;
        }
    });
    const double diag = weighted_kernel(1.0);
    const double off = pairwise_sum(row);
    double value = (2.0 * off + N * diag) / (static_cast<double>(N) * N);
    if (value < 0.0) value = 0.0;  // exact-zero configurations round either way

    // diag is also the partial Parseval sum, whose full value is
    // sigma(1-sigma); the difference bounds every neglected mode because
    // 0 <= (1/N^2) sum_{i,j} C_n(z_i.z_j) <= C_n(1)
    const double sigma = cap_measure(cap.d, cap.t);
    const double tail = std::max(0.0, sigma * (1.0 - sigma) - diag);

    DiscrepancyReport r;
    r.method = DiscrepancyMethod::Spectral;
    r.value = value;
    r.tail_bound = tail;
    r.cap = cap;
    r.n_points = N;
    r.n_max = n_max;
    return r;
}

DiscrepancyReport monte_carlo_discrepancy(const PointSet& Z, const CapSpec& cap,
                                          long long samples, std::uint64_t seed) {
    if (Z.d != cap.d) throw std::invalid_argument("dimension mismatch");
    if (samples < 1000) throw std::invalid_argument("samples must be at least 1000");
    validate_points(Z);
    const int N = Z.size();
    const int dim = cap.d + 1;
    const int words = 2 * ((dim + 1) / 2);  // counter words consumed per center
    const double sigma = cap_measure(cap.d, cap.t);
    const std::uint64_t stream = rng::word(seed, kCenterStream);

    constexpr long long kBlock = 4096;
    const long long n_blocks = (samples + kBlock - 1) / kBlock;
    std::vector<double> block2(n_blocks, 0.0), block4(n_blocks, 0.0);

    const int workers = static_cast<int>(std::min<long long>(thread_count(), n_blocks));
    run_striped(workers, [&](int w) {
        std::vector<double> g(dim);
        for (long long b = w; b < n_blocks; b += workers) {
            const long long lo = b * kBlock;
            const long long hi = std::min(samples, lo + kBlock);
            double s2 = 0.0, s4 = 0.0;
            for (long long s = lo; s < hi; ++s) {
                const std::uint64_t base = static_cast<std::uint64_t>(s) * words;
                for (int m = 0; 2 * m < dim; ++m) {
                    double ga, gb;
                    rng::gaussian_pair(stream, base + 2 * m, &ga, &gb);
                    g[2 * m] = ga;
                    if (2 * m + 1 < dim) g[2 * m + 1] = gb;
                }
                double norm2 = 0.0;
                for (int k = 0; k < dim; ++k) norm2 += g[k] * g[k];
                if (norm2 < 1e-300) {
                    g[0] = 1.0;
                    norm2 = 1.0;
                }
                // count(z.w/|w| >= t) as count(z.w >= t |w|): one sqrt per center
                const double thr = cap.t * std::sqrt(norm2);
                int count = 0;
                for (const auto& z : Z.points) {
                    double dot = 0.0;
                    for (int k = 0; k < dim; ++k) dot += z[k] * g[k];
                    count += dot >= thr;
                }
                const double e = static_cast<double>(count) / N - sigma;
                const double e2 = e * e;
                s2 += e2;
                s4 += e2 * e2;
            }
            block2[b] = s2;
            block4[b] = s4;
        }
    });

    const double sum2 = pairwise_sum(block2);
    const double sum4 = pairwise_sum(block4);
    const double mean = sum2 / samples;
    const double var =
        samples > 1 ? std::max(0.0, (sum4 - sum2 * sum2 / samples) / (samples - 1)) : 0.0;

    DiscrepancyReport r;
    r.method = DiscrepancyMethod::MonteCarlo;
    r.value = mean;
    r.stderr_value = std::sqrt(var / samples);
    r.cap = cap;
    r.n_points = N;
    r.samples = samples;
    r.seed = seed;
    return r;
}

double full_cap_discrepancy(const PointSet& Z, int t_grid_size, long long samples,
                            std::uint64_t seed) {
    if (t_grid_size < 8) throw std::invalid_argument("t_grid_size must be at least 8");
    validate_points(Z);
    // interior nodes of a uniform partition of [-1,1]; the integrand
    // vanishes at both endpoints, so the trapezoid rule collapses to
    // h * sum of the interior values
    const double h = 2.0 / (t_grid_size + 1);
    double total = 0.0;
    for (int j = 1; j <= t_grid_size; ++j) {
        const double t = -1.0 + h * j;
        const CapSpec cap = CapSpec::make(Z.d, t);
        const std::uint64_t node_seed = rng::word(seed, static_cast<std::uint64_t>(j));
        total += h * monte_carlo_discrepancy(Z, cap, samples, node_seed).value;
    }
    return total;
}

PointSet generate_pointset(PointSetKind kind, int N, int d, std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("N must be positive");
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    const int dim = d + 1;
    PointSet Z;
    Z.d = d;
    Z.points.assign(N, std::vector<double>(dim, 0.0));
    switch (kind) {
        case PointSetKind::Random: {
            const int words = 2 * ((dim + 1) / 2);
            const std::uint64_t stream = rng::word(seed, kPointStream);
            for (int i = 0; i < N; ++i) {
                auto& p = Z.points[i];
                const std::uint64_t base = static_cast<std::uint64_t>(i) * words;
                for (int m = 0; 2 * m < dim; ++m) {
                    double ga, gb;
                    rng::gaussian_pair(stream, base + 2 * m, &ga, &gb);
                    p[2 * m] = ga;
                    if (2 * m + 1 < dim) p[2 * m + 1] = gb;
                }
            }
            break;
        }
        case PointSetKind::Fibonacci: {
            if (d != 2) throw std::invalid_argument("unsupported");
            const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
            for (int i = 0; i < N; ++i) {
                const double z = 1.0 - (2.0 * i + 1.0) / N;
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double phi = golden_angle * i;
                Z.points[i] = {r * std::cos(phi), r * std::sin(phi), z};
            }
            break;
        }
        case PointSetKind::Equispaced: {
            if (d != 1) throw std::invalid_argument("unsupported");
            for (int i = 0; i < N; ++i) {
                const double phi = 2.0 * kPi * i / N;
                Z.points[i] = {std::cos(phi), std::sin(phi)};
            }
            break;
        }
    }
    for (auto& p : Z.points) {
        double norm2 = 0.0;
        for (double c : p) norm2 += c * c;
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : p) c *= inv;
    }
    return Z;
}

PointSet load_pointset(std::istream& in) {
    int d = 0;
    long long N = 0;
    if (!(in >> d >> N) || d < 1 || N < 1)
        throw std::runtime_error("malformed point-set header");
    PointSet Z;
    Z.d = d;
    Z.points.assign(N, std::vector<double>(d + 1, 0.0));
    for (auto& p : Z.points) {
        for (auto& c : p)
            if (!(in >> c)) throw std::runtime_error("truncated point-set file");
        double norm2 = 0.0;
        for (double c : p) norm2 += c * c;
        const double norm = std::sqrt(norm2);
        if (std::fabs(norm - 1.0) > 1e-9)
            throw std::runtime_error("point norm out of tolerance");
        for (auto& c : p) c /= norm;
    }
    return Z;
}

void save_pointset(std::ostream& out, const PointSet& Z) {
    out << Z.d << ' ' << Z.points.size() << '\n' << std::setprecision(17);
    for (const auto& p : Z.points) {
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (k > 0) out << ' ';
            out << p[k];
        }
        out << '\n';
    }
}

}
