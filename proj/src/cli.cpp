#include "gegenbad/cli.hpp"

#include "gegenbad/cap_discrepancy.hpp"
#include "gegenbad/certifier.hpp"
#include "gegenbad/diophantine.hpp"
#include "gegenbad/gegenbauer.hpp"
#include "gegenbad/rng.hpp"
#include "gegenbad/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gegenbad {
namespace {

using json = nlohmann::ordered_json;

// I/O problems carry their own exit code (3), distinct from the
// numerical-failure class that plain runtime errors do not cover.
struct io_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::int64_t parse_int(const std::string& s) {
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

std::pair<std::int64_t, std::int64_t> parse_fraction(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == s.size())
        throw std::invalid_argument("expected a fraction p/q, got '" + s + "'");
    return {parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1))};
}

// "u/v" stays exact; anything else is read as a decimal.
OrderParam parse_order(const std::string& s) {
    if (s.find('/') != std::string::npos) {
        const auto [u, v] = parse_fraction(s);
        if (u <= 0 || v <= 0) throw std::invalid_argument("order must be positive: '" + s + "'");
        return OrderParam::from_rational(u, v);
    }
    const double v = parse_double(s);
    if (!(v > 0.0)) throw std::invalid_argument("order must be positive: '" + s + "'");
    return OrderParam::from_real(v);
}

std::string strip_spaces(const std::string& s) {
    std::string out;
    for (char c : s)
        if (c != ' ') out.push_back(c);
    return out;
}

// Accepts "cos(pi*p/q)" with 0 < p < q (evaluated in long double so the
// height enters at full precision), or a plain decimal unless
// literal_only is set. Anything else is a usage error.
double parse_height(const std::string& raw, bool literal_only) {
    const std::string s = strip_spaces(raw);
    if (s.rfind("cos(", 0) == 0) {
        const std::string prefix = "cos(pi*";
        if (s.rfind(prefix, 0) != 0 || s.back() != ')')
            throw std::invalid_argument("malformed height literal '" + raw +
                                        "', expected cos(pi*p/q)");
        const auto [p, q] = parse_fraction(s.substr(prefix.size(), s.size() - prefix.size() - 1));
        if (q <= 0 || p <= 0 || p >= q)
            throw std::invalid_argument("height literal needs 0 < p < q, got '" + raw + "'");
        const long double pi_l = std::acos(-1.0L);
        return static_cast<double>(std::cos(pi_l * static_cast<long double>(p) /
                                            static_cast<long double>(q)));
    }
    if (literal_only)
        throw std::invalid_argument("malformed height literal '" + raw +
                                    "', expected cos(pi*p/q)");
    return parse_double(s);
}

PointSetKind parse_kind(const std::string& s) {
    if (s == "random") return PointSetKind::Random;
    if (s == "fibonacci") return PointSetKind::Fibonacci;
    if (s == "equispaced") return PointSetKind::Equispaced;
    throw std::invalid_argument("unknown point-set kind '" + s + "'");
}

const char* method_name(DiscrepancyMethod m) {
    switch (m) {
        case DiscrepancyMethod::Spectral: return "spectral";
        case DiscrepancyMethod::MonteCarlo: return "mc";
        case DiscrepancyMethod::Floor: return "floor";
    }
    return "spectral";
}

const char* class_name(QuadraticClass k) {
    switch (k) {
        case QuadraticClass::InVaronaSet: return "InVaronaSet";
        case QuadraticClass::InVaronaSetButObstructed: return "InVaronaSetButObstructed";
        case QuadraticClass::BoundaryExcluded: return "BoundaryExcluded";
        case QuadraticClass::NotRationalAngle: return "NotRationalAngle";
    }
    return "NotRationalAngle";
}

json order_json(const OrderParam& lam) {
    json j;
    j["value"] = lam.value;
    j["exact"] = lam.has_exact;
    if (lam.has_exact) {
        j["num"] = lam.num;
        j["den"] = lam.den;
    }
    return j;
}

json certificate_json(const Certificate& c) {
    json j;
    j["p"] = c.angle.p;
    j["q"] = c.angle.q;
    j["lambda"] = order_json(c.lambda);
    j["verdict"] = verdict_name(c.verdict);
    j["witness_n"] = c.witness_n ? json(*c.witness_n) : json(nullptr);
    j["phase_gap"] = c.phase_gap_X;
    j["n_threshold"] = c.n_threshold;
    j["checked_up_to"] = c.checked_up_to;
    j["empirical_c"] = c.empirical_c;
    j["zero_tolerance"] = c.zero_tolerance_used;
    j["absolute_value_extension"] = c.threshold_absolute_value_extension;
    j["note"] = c.note;
    return j;
}

json discrepancy_json(const DiscrepancyReport& r) {
    json j;
    j["method"] = method_name(r.method);
    j["d"] = r.cap.d;
    j["t"] = r.cap.t;
    j["lambda"] = r.cap.lambda();
    j["sigma"] = cap_measure(r.cap.d, r.cap.t);
    j["n_points"] = r.n_points;
    j["value"] = r.value;
    switch (r.method) {
        case DiscrepancyMethod::Spectral:
            j["n_max"] = r.n_max;
            j["tail_bound"] = r.tail_bound ? json(*r.tail_bound) : json(nullptr);
            break;
        case DiscrepancyMethod::MonteCarlo:
            j["samples"] = r.samples;
            j["seed"] = r.seed;
            j["stderr"] = r.stderr_value ? json(*r.stderr_value) : json(nullptr);
            break;
        case DiscrepancyMethod::Floor:
            j["floor_K"] = r.floor_K;
            break;
    }
    return j;
}

// Round-trip formatting for CSV cells; json's dump gives the shortest
// representation that parses back to the same double.
std::string number_cell(double v) { return json(v).dump(); }

std::string csv_escape(const std::string& f) {
    if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

void flatten(const json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten(v, prefix.empty() ? k : prefix + "_" + k, rows);
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& v : j) flatten(v, prefix + "_" + std::to_string(i++), rows);
    } else if (j.is_null()) {
        rows.emplace_back(prefix, "");
    } else if (j.is_string()) {
        rows.emplace_back(prefix, j.get<std::string>());
    } else {
        rows.emplace_back(prefix, j.dump());
    }
}

struct CommandResult {
    json inputs;
    json outputs;
    std::string csv;  // empty: derive a field,value table from outputs
};

double fit_loglog_slope(const std::vector<std::pair<long long, double>>& rows) {
    const double n = static_cast<double>(rows.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [N, v] : rows) {
        const double x = std::log10(static_cast<double>(N));
        const double y = std::log10(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = sxx - sx * sx / n;
    if (!(denom > 0.0)) throw std::invalid_argument("need at least two distinct N values");
    return (sxy - sx * sy / n) / denom;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gegenbauer certification and spherical cap discrepancy tool"};
    app.require_subcommand(1);
    std::string format = "json";
    const auto add_format = [&format](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a Gegenbauer polynomial");
    int ev_n = 0;
    std::string ev_lambda, ev_x, ev_angle;
    eval_cmd->add_option("--n", ev_n, "degree")->required()->check(CLI::NonNegativeNumber);
    eval_cmd->add_option("--lambda", ev_lambda, "order, decimal or u/v")->required();
    auto* ev_opt_x = eval_cmd->add_option("--x", ev_x, "point, decimal or cos(pi*p/q)");
    auto* ev_opt_angle = eval_cmd->add_option("--angle", ev_angle, "p/q for x = cos(pi p/q)");
    ev_opt_x->excludes(ev_opt_angle);
    add_format(eval_cmd);

    auto* certify_cmd = app.add_subcommand("certify", "run the gegenbad certification pipeline");
    std::int64_t cf_p = 0, cf_q = 0;
    std::string cf_lambda;
    int cf_nmax = 0;
    certify_cmd->add_option("p", cf_p, "angle numerator")->required();
    certify_cmd->add_option("q", cf_q, "angle denominator")->required();
    certify_cmd->add_option("lambda", cf_lambda, "order, decimal or u/v")->required();
    certify_cmd->add_option("--n-max", cf_nmax, "extend the root scan")->check(CLI::PositiveNumber);
    add_format(certify_cmd);

    auto* figure1_cmd = app.add_subcommand("figure1", "scaled-sequence table at x = 1/2 and x = 1/3");
    int fg_nmax = 500;
    std::string fg_out = "figure1.csv";
    figure1_cmd->add_option("--n-max", fg_nmax, "rows to emit")->check(CLI::PositiveNumber);
    figure1_cmd->add_option("--out", fg_out, "output CSV path");
    add_format(figure1_cmd);

    auto* disc_cmd = app.add_subcommand("discrepancy", "single-radius cap discrepancy");
    std::string ds_file;
    std::vector<std::string> ds_generate;
    int ds_d = 2;
    std::string ds_t, ds_theight, ds_method = "spectral";
    int ds_nmax = 0;
    long long ds_samples = 200000, ds_npoints = 0;
    std::uint64_t ds_seed = 0;
    double ds_kappa = 1.0;
    bool ds_assert3 = false;
    disc_cmd->add_option("pointset", ds_file, "point-set file");
    disc_cmd->add_option("--generate", ds_generate, "kind N")->expected(2);
    disc_cmd->add_option("--d", ds_d, "sphere dimension")->check(CLI::PositiveNumber);
    auto* ds_opt_t = disc_cmd->add_option("--t", ds_t, "cap height, decimal");
    auto* ds_opt_th = disc_cmd->add_option("--t-height", ds_theight, "cap height cos(pi*p/q)");
    ds_opt_t->excludes(ds_opt_th);
    disc_cmd->add_option("--method", ds_method, "spectral, mc, or floor")
        ->check(CLI::IsMember({"spectral", "mc", "floor"}));
    disc_cmd->add_option("--n-max", ds_nmax, "spectral truncation depth")->check(CLI::PositiveNumber);
    disc_cmd->add_option("--samples", ds_samples, "Monte Carlo cap centers");
    disc_cmd->add_option("--seed", ds_seed, "RNG seed");
    disc_cmd->add_option("--kappa", ds_kappa, "floor depth constant");
    disc_cmd->add_option("--n-points", ds_npoints, "point count for the floor");
    disc_cmd->add_flag("--assert-theorem3", ds_assert3, "warn when d is outside the lower-bound hypotheses");
    add_format(disc_cmd);

    auto* scaling_cmd = app.add_subcommand("scaling", "discrepancy against N with a log-log fit");
    int sc_d = 2, sc_nmax = 0, sc_configs = 1;
    std::string sc_t, sc_theight, sc_method = "floor", sc_nlist, sc_kind = "random";
    double sc_kappa = 1.0;
    long long sc_samples = 40000;
    std::uint64_t sc_seed = 0;
    scaling_cmd->add_option("--d", sc_d, "sphere dimension")->check(CLI::PositiveNumber);
    auto* sc_opt_t = scaling_cmd->add_option("--t", sc_t, "cap height, decimal");
    auto* sc_opt_th = scaling_cmd->add_option("--t-height", sc_theight, "cap height cos(pi*p/q)");
    sc_opt_t->excludes(sc_opt_th);
    scaling_cmd->add_option("--method", sc_method, "floor, mc, or spectral")
        ->check(CLI::IsMember({"floor", "mc", "spectral"}));
    scaling_cmd->add_option("--n-list", sc_nlist, "comma-separated point counts")->required();
    scaling_cmd->add_option("--kind", sc_kind, "point-set kind for mc and spectral")
        ->check(CLI::IsMember({"random", "fibonacci", "equispaced"}));
    scaling_cmd->add_option("--kappa", sc_kappa, "floor depth constant");
    scaling_cmd->add_option("--samples", sc_samples, "Monte Carlo cap centers per N");
    scaling_cmd->add_option("--seed", sc_seed, "RNG seed");
    scaling_cmd->add_option("--n-max", sc_nmax, "spectral truncation depth")->check(CLI::PositiveNumber);
    scaling_cmd
        ->add_option("--configs", sc_configs,
                     "random configurations averaged per N; a single draw carries O(1) "
                     "relative scatter independent of N, dominated by the lowest mode")
        ->check(CLI::PositiveNumber);
    add_format(scaling_cmd);

    auto* classify_cmd = app.add_subcommand("classify", "classify x with x^2 = a/b");
    std::int64_t cl_a = 0, cl_b = 0;
    classify_cmd->add_option("a", cl_a, "numerator of x^2")->required();
    classify_cmd->add_option("b", cl_b, "denominator of x^2")->required();
    add_format(classify_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    const auto started = std::chrono::steady_clock::now();
    std::string command;
    CommandResult res;

    const auto run_eval = [&]() {
        if (ev_opt_x->count() + ev_opt_angle->count() != 1)
            throw std::invalid_argument("exactly one of --x and --angle is required");
        const OrderParam lambda = parse_order(ev_lambda);
        res.inputs["n"] = std::to_string(ev_n);
        res.inputs["lambda"] = ev_lambda;
        double x = 0.0;
        if (ev_opt_x->count() > 0) {
            x = parse_height(ev_x, false);
            res.inputs["x"] = ev_x;
        } else {
            const auto [p, q] = parse_fraction(ev_angle);
            x = RationalAngle::make(p, q).x();
            res.inputs["angle"] = ev_angle;
        }
        const double value = gegenbauer_eval(ev_n, lambda, x);
        const double scaled =
            ev_n >= 1 ? value / std::pow(static_cast<double>(ev_n), lambda.value - 1.0) : value;
        res.outputs["n"] = ev_n;
        res.outputs["lambda"] = order_json(lambda);
        res.outputs["x"] = x;
        res.outputs["value"] = value;
        res.outputs["scaled"] = scaled;
    };

    const auto run_certify = [&]() {
        if (cf_p <= 0 || cf_q <= 0 || cf_p >= cf_q || std::gcd(cf_p, cf_q) != 1)
            throw std::invalid_argument("need 0 < p < q with gcd(p, q) = 1");
        const OrderParam lambda = parse_order(cf_lambda);
        const RationalAngle angle = RationalAngle::make(cf_p, cf_q);
        std::optional<int> n_max_override;
        if (certify_cmd->count("--n-max") > 0) n_max_override = cf_nmax;
        res.inputs["p"] = std::to_string(cf_p);
        res.inputs["q"] = std::to_string(cf_q);
        res.inputs["lambda"] = cf_lambda;
        if (n_max_override) res.inputs["n_max"] = std::to_string(*n_max_override);
        res.outputs = certificate_json(certify(angle, lambda, n_max_override));
    };

    const auto run_figure1 = [&]() {
        const OrderParam lambda = OrderParam::from_rational(3, 2);
        const GegenSequence half = gegenbauer_sequence(fg_nmax, lambda, 0.5);
        const GegenSequence third = gegenbauer_sequence(fg_nmax, lambda, 1.0 / 3.0);
        std::ofstream ofs(fg_out);
        if (!ofs) throw io_failure("cannot open '" + fg_out + "' for writing");
        ofs << "n,scaled_half,scaled_third\n" << std::setprecision(17);
        double min_half = std::numeric_limits<double>::infinity();
        double min_third = min_half;
        for (int n = 1; n <= fg_nmax; ++n) {
            const double sh = half.entries[n].scaled;
            const double st = third.entries[n].scaled;
            ofs << n << "," << sh << "," << st << "\n";
            min_half = std::min(min_half, std::fabs(sh));
            min_third = std::min(min_third, std::fabs(st));
        }
        ofs.flush();
        if (!ofs.good()) throw io_failure("write to '" + fg_out + "' failed");
        res.inputs["n_max"] = std::to_string(fg_nmax);
        res.inputs["out"] = fg_out;
        res.outputs["n_max"] = fg_nmax;
        res.outputs["path"] = fg_out;
        res.outputs["rows"] = fg_nmax;
        res.outputs["min_abs_scaled_half"] = min_half;
        res.outputs["min_abs_scaled_third"] = min_third;
    };

    const auto run_discrepancy = [&]() {
        const bool has_file = disc_cmd->count("pointset") > 0;
        const bool has_gen = disc_cmd->count("--generate") > 0;
        if (has_file && has_gen)
            throw std::invalid_argument("give a point-set file or --generate, not both");
        if (ds_opt_t->count() + ds_opt_th->count() != 1)
            throw std::invalid_argument("exactly one of --t and --t-height is required");
        const double t =
            ds_opt_t->count() > 0 ? parse_double(ds_t) : parse_height(ds_theight, true);

        std::optional<PointSet> points;
        if (has_file) {
            std::ifstream ifs(ds_file);
            if (!ifs) throw io_failure("cannot open '" + ds_file + "'");
            points = load_pointset(ifs);
            if (disc_cmd->count("--d") > 0 && ds_d != points->d)
                throw std::invalid_argument("--d disagrees with the point-set file");
            ds_d = points->d;
            res.inputs["pointset"] = ds_file;
        } else if (has_gen) {
            const PointSetKind kind = parse_kind(ds_generate[0]);
            const std::int64_t N = parse_int(ds_generate[1]);
            if (N <= 0) throw std::invalid_argument("point count must be positive");
            points = generate_pointset(kind, static_cast<int>(N), ds_d, ds_seed);
            res.inputs["generate"] = ds_generate[0] + " " + ds_generate[1];
        }
        const CapSpec cap = CapSpec::make(ds_d, t);
        if (ds_assert3 && cap.dimension_excluded())
            err << "warning: d = " << ds_d << " is outside Theorem 3 hypotheses\n";

        res.inputs["method"] = ds_method;
        res.inputs["d"] = std::to_string(ds_d);
        if (ds_opt_t->count() > 0) res.inputs["t"] = ds_t;
        else res.inputs["t_height"] = ds_theight;

        DiscrepancyReport rep;
        if (ds_method == "floor") {
            const long long N = disc_cmd->count("--n-points") > 0
                                    ? ds_npoints
                                    : (points ? points->size() : 0);
            if (N <= 0) throw std::invalid_argument("floor needs --n-points or a point set");
            res.inputs["n_points"] = std::to_string(N);
            res.inputs["kappa"] = number_cell(ds_kappa);
            rep = bilyk_dai_floor(cap, N, ds_kappa);
        } else if (!points) {
            throw std::invalid_argument("method '" + ds_method +
                                        "' needs a point-set file or --generate");
        } else if (ds_method == "spectral") {
            const int depth =
                disc_cmd->count("--n-max") > 0 ? ds_nmax : default_spectral_n_max(cap, points->size());
            res.inputs["n_max"] = std::to_string(depth);
            rep = spectral_discrepancy(*points, cap, depth);
        } else {
            res.inputs["samples"] = std::to_string(ds_samples);
            res.inputs["seed"] = std::to_string(ds_seed);
            rep = monte_carlo_discrepancy(*points, cap, ds_samples, ds_seed);
        }
        res.outputs = discrepancy_json(rep);
    };

    const auto run_scaling = [&]() {
        if (sc_opt_t->count() + sc_opt_th->count() != 1)
            throw std::invalid_argument("exactly one of --t and --t-height is required");
        const double t =
            sc_opt_t->count() > 0 ? parse_double(sc_t) : parse_height(sc_theight, true);
        const CapSpec cap = CapSpec::make(sc_d, t);
        std::vector<long long> Ns;
        {
            std::string token;
            std::istringstream iss(sc_nlist);
            while (std::getline(iss, token, ',')) {
                const std::int64_t N = parse_int(token);
                if (N <= 0) throw std::invalid_argument("point counts must be positive");
                Ns.push_back(N);
            }
        }
        if (Ns.size() < 2) throw std::invalid_argument("need at least two N values");
        const PointSetKind kind = parse_kind(sc_kind);

        std::vector<std::pair<long long, double>> rows;
        for (long long N : Ns) {
            double v = 0.0;
            if (sc_method == "floor") {
                v = bilyk_dai_floor(cap, N, sc_kappa).value;
            } else {
                // one decorrelated stream per (N, configuration);
                // generation and cap sampling already use disjoint
                // substreams internally
                const std::uint64_t n_seed = rng::word(sc_seed, static_cast<std::uint64_t>(N));
                for (int c = 0; c < sc_configs; ++c) {
                    const std::uint64_t run_seed = rng::word(n_seed, static_cast<std::uint64_t>(c));
                    const PointSet Z = generate_pointset(kind, static_cast<int>(N), sc_d, run_seed);
                    if (sc_method == "mc") {
                        v += monte_carlo_discrepancy(Z, cap, sc_samples, run_seed).value;
                    } else {
                        const int depth = scaling_cmd->count("--n-max") > 0
                                              ? sc_nmax
                                              : default_spectral_n_max(cap, Z.size());
                        v += spectral_discrepancy(Z, cap, depth).value;
                    }
                }
                v /= sc_configs;
            }
            if (!(v > 0.0))
                throw std::domain_error("nonpositive value at N = " + std::to_string(N) +
                                        ", log-log fit undefined");
            rows.emplace_back(N, v);
        }
        const double slope = fit_loglog_slope(rows);

        res.inputs["method"] = sc_method;
        res.inputs["d"] = std::to_string(sc_d);
        if (sc_opt_t->count() > 0) res.inputs["t"] = sc_t;
        else res.inputs["t_height"] = sc_theight;
        res.inputs["n_list"] = sc_nlist;
        if (sc_method == "floor") res.inputs["kappa"] = number_cell(sc_kappa);
        else {
            res.inputs["kind"] = sc_kind;
            res.inputs["seed"] = std::to_string(sc_seed);
            res.inputs["configs"] = std::to_string(sc_configs);
            if (sc_method == "mc") res.inputs["samples"] = std::to_string(sc_samples);
        }

        res.outputs["method"] = sc_method;
        res.outputs["d"] = sc_d;
        res.outputs["t"] = t;
        json jrows = json::array();
        for (const auto& [N, v] : rows) jrows.push_back(json::array({N, v}));
        res.outputs["rows"] = jrows;
        res.outputs["slope"] = slope;

        std::string csv = "N,value\r\n";
        for (const auto& [N, v] : rows)
            csv += std::to_string(N) + "," + number_cell(v) + "\r\n";
        csv += "slope," + number_cell(slope) + "\r\n";
        res.csv = csv;
    };

    const auto run_classify = [&]() {
        if (cl_b <= 0 || cl_a < 0 || cl_a > cl_b)
            throw std::invalid_argument("need 0 <= a <= b with b >= 1");
        const QuadraticClassification c = classify_quadratic(cl_a, cl_b);
        res.inputs["a"] = std::to_string(cl_a);
        res.inputs["b"] = std::to_string(cl_b);
        res.outputs["a"] = cl_a;
        res.outputs["b"] = cl_b;
        res.outputs["kind"] = class_name(c.kind);
        res.outputs["lambda"] = c.lambda ? order_json(*c.lambda) : json(nullptr);
        res.outputs["certificate"] =
            c.certificate ? certificate_json(*c.certificate) : json(nullptr);
    };

    try {
        if (eval_cmd->parsed()) {
            command = "eval";
            run_eval();
        } else if (certify_cmd->parsed()) {
            command = "certify";
            run_certify();
        } else if (figure1_cmd->parsed()) {
            command = "figure1";
            run_figure1();
        } else if (disc_cmd->parsed()) {
            command = "discrepancy";
            run_discrepancy();
        } else if (scaling_cmd->parsed()) {
            command = "scaling";
            run_scaling();
        } else if (classify_cmd->parsed()) {
            command = "classify";
            run_classify();
        } else {
            err << "usage error: no command given\n";
            return 2;
        }
    } catch (const io_failure& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::overflow_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 4;
    }

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    if (format == "json") {
        json report;
        report["command"] = command;
        report["inputs"] = res.inputs;
        report["outputs"] = res.outputs;
        report["tool_version"] = tool_version;
        report["elapsed_ms"] = elapsed;
        out << report.dump(2) << "\n";
    } else if (!res.csv.empty()) {
        out << res.csv;
    } else {
        std::vector<std::pair<std::string, std::string>> rows;
        flatten(res.outputs, "", rows);
        out << "field,value\r\n";
        for (const auto& [k, v] : rows)
            out << csv_escape(k) << "," << csv_escape(v) << "\r\n";
    }
    return 0;
}

}
