#include "doctest.h"

#include "gegenbad/cap_discrepancy.hpp"
#include "gegenbad/cli.hpp"
#include "gegenbad/version.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace gegenbad;
using nlohmann::json;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

json report(const CliRun& r) {
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

// payload with the timing removed, for byte-level determinism checks
std::string canonical(const std::string& out) {
    json j = json::parse(out);
    j.erase("elapsed_ms");
    return j.dump();
}

bool looks_like_version(const std::string& s) {
    int groups = 0;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) return false;
        ++groups;
        if (j == s.size()) break;
        if (s[j] != '.') return false;
        i = j + 1;
    }
    return groups == 3;
}

// Checks a report against the shipped schema: required keys, the
// command enum, string-valued inputs, integral elapsed_ms, and the
// closed property set. Not a general validator, just the subset the
// schema actually uses.
void check_against_schema(const json& rep) {
    std::ifstream ifs(GEGENBAD_SCHEMA_PATH);
    REQUIRE(ifs.good());
    const json schema = json::parse(ifs);

    for (const auto& req : schema.at("required"))
        CHECK(rep.contains(req.get<std::string>()));
    const auto& props = schema.at("properties");
    for (const auto& [key, value] : rep.items()) {
        CHECK(props.contains(key));
        (void)value;
    }
    bool command_ok = false;
    for (const auto& allowed : props.at("command").at("enum"))
        command_ok = command_ok || allowed == rep.at("command");
    CHECK(command_ok);
    CHECK(rep.at("inputs").is_object());
    for (const auto& [key, value] : rep.at("inputs").items()) {
        CHECK(value.is_string());
        (void)key;
    }
    CHECK(rep.at("outputs").is_object());
    CHECK(rep.at("tool_version").is_string());
    CHECK(looks_like_version(rep.at("tool_version").get<std::string>()));
    CHECK(looks_like_version("1.0.0"));
    CHECK(!looks_like_version("1.0"));
    CHECK(!looks_like_version("a.b.c"));
    CHECK(rep.at("elapsed_ms").is_number_integer());
    CHECK(rep.at("elapsed_ms").get<long long>() >= 0);
}

}  // namespace

TEST_CASE("eval worked examples") {
    const json half = report(run({"eval", "--n", "2", "--lambda", "3/2", "--x", "0.5"}));
    CHECK(half.at("command") == "eval");
    CHECK(half.at("tool_version") == std::string(tool_version));
    CHECK(half.at("outputs").at("value").get<double>() == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(half.at("outputs").at("lambda").at("exact") == true);
    CHECK(half.at("outputs").at("lambda").at("num") == 3);

    const json deg0 = report(run({"eval", "--n", "0", "--lambda", "2", "--x", "-0.3"}));
    CHECK(deg0.at("outputs").at("value").get<double>() == 1.0);
    CHECK(deg0.at("outputs").at("scaled").get<double>() == 1.0);

    // near the order where C_11 has a root at cos(pi/5)
    const json near_root =
        report(run({"eval", "--n", "11", "--lambda", "7.9181", "--angle", "1/5"}));
    const double v = near_root.at("outputs").at("value").get<double>();
    CHECK(std::fabs(v) < 1e-4 * std::pow(11.0, 7.9181 - 1.0));
    CHECK(std::fabs(near_root.at("outputs").at("scaled").get<double>()) < 1e-4);
}

TEST_CASE("eval height literal agrees with the angle form") {
    const json lit = report(run({"eval", "--n", "7", "--lambda", "3/2", "--x", "cos(pi*1/5)"}));
    const json ang = report(run({"eval", "--n", "7", "--lambda", "3/2", "--angle", "1/5"}));
    CHECK(lit.at("outputs").at("value").get<double>() ==
          ang.at("outputs").at("value").get<double>());
    CHECK(lit.at("outputs").at("x").get<double>() == ang.at("outputs").at("x").get<double>());
}

TEST_CASE("eval usage errors exit 2 with empty stdout") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"eval", "--n", "2", "--lambda", "3/2", "--x", "cos(pi*1/5"},
             {"eval", "--n", "2", "--lambda", "3/2", "--x", "cos(phi*1/5)"},
             {"eval", "--n", "2", "--lambda", "3/2", "--x", "0.5", "--angle", "1/5"},
             {"eval", "--n", "2", "--lambda", "3/2"},
             {"eval", "--n", "2", "--lambda", "3/2", "--angle", "1/0"},
             {"eval", "--n", "2", "--lambda", "0", "--x", "0.5"},
             {"eval", "--n", "2", "--lambda", "3/2", "--x", "nope"},
             {"eval", "--lambda", "3/2", "--x", "0.5"},
         }) {
        const CliRun r = run(args);
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        CHECK(!r.err.empty());
    }
}

TEST_CASE("eval overflow maps to the numerical-failure exit code") {
    const CliRun r = run({"eval", "--n", "1000", "--lambda", "1", "--x", "2.0"});
    CHECK(r.code == 4);
    CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("eval csv output is a field table") {
    const CliRun r = run({"eval", "--n", "2", "--lambda", "3/2", "--x", "0.5",
                          "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("field,value\r\n", 0) == 0);
    CHECK(r.out.find("value,0.375") != std::string::npos);
}

TEST_CASE("certify pipeline through the tool") {
    const json ok = report(run({"certify", "1", "3", "3/2"}));
    CHECK(ok.at("outputs").at("verdict") == "GegenbadlyApproximable");
    CHECK(ok.at("outputs").at("empirical_c").get<double>() ==
          doctest::Approx(0.25569209503805407).epsilon(1e-12));
    CHECK(ok.at("outputs").at("n_threshold").get<double>() ==
          doctest::Approx(8.162097139053984).epsilon(1e-12));
    CHECK(ok.at("outputs").at("witness_n").is_null());

    const json quarter = report(run({"certify", "1", "4", "3/2"}));
    CHECK(quarter.at("outputs").at("verdict") == "GegenbadlyApproximable");
    CHECK(quarter.at("outputs").at("empirical_c").get<double>() > 0.0);

    const json order_one = report(run({"certify", "1", "2", "1"}));
    CHECK(order_one.at("outputs").at("verdict") == "FailsConditionII");
    CHECK(order_one.at("outputs").at("witness_n") == 1);

    const json odd = report(run({"certify", "1", "2", "3"}));
    CHECK(odd.at("outputs").at("verdict") == "FailsOddLambda");

    const json deep = report(run({"certify", "1", "3", "3/2", "--n-max", "300"}));
    CHECK(deep.at("outputs").at("checked_up_to").get<int>() >= 300);
}

TEST_CASE("certify rejects unreduced and out-of-range angles") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"certify", "2", "8", "3/2"},
             {"certify", "3", "2", "3/2"},
             {"certify", "3", "3", "3/2"},
             {"certify", "0", "3", "3/2"},
             {"certify", "1", "3", "0"},
             {"certify", "1", "3", "-1/2"},
         }) {
        const CliRun r = run(args);
        CHECK(r.code == 2);
        CHECK(r.out.empty());
    }
}

TEST_CASE("figure1 writes the scaled-sequence table") {
    const std::string path = "cli_fig1_test.csv";
    const CliRun r = run({"figure1", "--out", path});
    const json rep = report(r);
    CHECK(rep.at("outputs").at("rows").get<int>() == 500);
    CHECK(rep.at("outputs").at("min_abs_scaled_half").get<double>() > 0.1);
    CHECK(rep.at("outputs").at("min_abs_scaled_third").get<double>() < 0.05);

    std::ifstream ifs(path);
    REQUIRE(ifs.good());
    std::string line;
    std::getline(ifs, line);
    CHECK(line == "n,scaled_half,scaled_third");
    int rows = 0;
    while (std::getline(ifs, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 500);
    ifs.close();

    // identical bytes on a second run, file and payload alike
    const CliRun again = run({"figure1", "--out", path});
    CHECK(canonical(r.out) == canonical(again.out));
    std::ifstream second(path);
    std::stringstream file_bytes;
    file_bytes << second.rdbuf();
    std::ifstream reference("cli_fig1_test.csv");
    std::stringstream ref_bytes;
    ref_bytes << reference.rdbuf();
    CHECK(file_bytes.str() == ref_bytes.str());
    std::remove(path.c_str());
}

TEST_CASE("figure1 unwritable path exits 3") {
    const CliRun r = run({"figure1", "--out", "no-such-dir/fig.csv"});
    CHECK(r.code == 3);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
}

TEST_CASE("discrepancy single point against the analytic value") {
    const json rep = report(run({"discrepancy", "--generate", "random", "1", "--d", "2",
                                 "--t", "0.5", "--method", "mc", "--samples", "20000",
                                 "--seed", "42"}));
    const double value = rep.at("outputs").at("value").get<double>();
    const double se = rep.at("outputs").at("stderr").get<double>();
    CHECK(std::fabs(value - 0.1875) < 4.0 * se);
    CHECK(rep.at("outputs").at("sigma").get<double>() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(rep.at("outputs").at("samples").get<long long>() == 20000);
}

TEST_CASE("discrepancy spectral run matches the library") {
    const json rep = report(run({"discrepancy", "--generate", "fibonacci", "100", "--d", "2",
                                 "--t", "0.5", "--method", "spectral", "--n-max", "600",
                                 "--seed", "0"}));
    const PointSet Z = generate_pointset(PointSetKind::Fibonacci, 100, 2, 0);
    const DiscrepancyReport direct = spectral_discrepancy(Z, CapSpec::make(2, 0.5), 600);
    CHECK(rep.at("outputs").at("value").get<double>() == direct.value);
    CHECK(rep.at("outputs").at("tail_bound").get<double>() == *direct.tail_bound);
    CHECK(rep.at("outputs").at("n_points").get<int>() == 100);
}

TEST_CASE("discrepancy floor run matches the library") {
    const json rep = report(run({"discrepancy", "--method", "floor", "--d", "2", "--t", "0.5",
                                 "--n-points", "10000", "--kappa", "1"}));
    const DiscrepancyReport direct = bilyk_dai_floor(CapSpec::make(2, 0.5), 10000, 1.0);
    CHECK(rep.at("outputs").at("value").get<double>() == direct.value);
    CHECK(rep.at("outputs").at("floor_K").get<int>() == 100);
}

TEST_CASE("discrepancy height literal equals the decimal route") {
    const json lit = report(run({"discrepancy", "--method", "floor", "--d", "2", "--t-height",
                                 "cos(pi*1/3)", "--n-points", "100"}));
    CHECK(lit.at("outputs").at("t").get<double>() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("discrepancy warns outside the lower-bound dimensions") {
    const CliRun warned = run({"discrepancy", "--generate", "random", "20", "--d", "5", "--t",
                               "0.3", "--method", "mc", "--samples", "1000",
                               "--assert-theorem3"});
    CHECK(warned.code == 0);
    CHECK(warned.err.find("outside Theorem 3 hypotheses") != std::string::npos);

    const CliRun fine = run({"discrepancy", "--generate", "random", "20", "--d", "2", "--t",
                             "0.3", "--method", "mc", "--samples", "1000",
                             "--assert-theorem3"});
    CHECK(fine.code == 0);
    CHECK(fine.err.empty());
}

TEST_CASE("discrepancy reads point-set files") {
    const std::string path = "cli_points_test.txt";
    const PointSet Z = generate_pointset(PointSetKind::Random, 20, 2, 3);
    {
        std::ofstream ofs(path);
        save_pointset(ofs, Z);
    }
    const json rep = report(run({"discrepancy", path, "--t", "0.5", "--method", "spectral",
                                 "--n-max", "200"}));
    const DiscrepancyReport direct = spectral_discrepancy(Z, CapSpec::make(2, 0.5), 200);
    CHECK(rep.at("outputs").at("value").get<double>() ==
          doctest::Approx(direct.value).epsilon(1e-12));

    const CliRun mismatch = run({"discrepancy", path, "--d", "1", "--t", "0.5"});
    CHECK(mismatch.code == 2);

    const CliRun missing = run({"discrepancy", "no_such_points.txt", "--t", "0.5"});
    CHECK(missing.code == 3);

    {
        std::ofstream ofs(path);
        ofs << "not a header\n";
    }
    const CliRun malformed = run({"discrepancy", path, "--t", "0.5"});
    CHECK(malformed.code == 3);
    std::remove(path.c_str());
}

TEST_CASE("discrepancy usage errors") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"discrepancy", "--t", "0.5"},
             {"discrepancy", "--generate", "random", "10", "--d", "2"},
             {"discrepancy", "--generate", "random", "10", "--t", "0.5", "--t-height",
              "cos(pi*1/3)"},
             {"discrepancy", "--generate", "random", "10", "--t-height", "0.5"},
             {"discrepancy", "--generate", "hexagonal", "10", "--t", "0.5"},
             {"discrepancy", "--generate", "random", "0", "--t", "0.5"},
             {"discrepancy", "--method", "floor", "--d", "2", "--t", "0.5"},
         }) {
        const CliRun r = run(args);
        CHECK(r.code == 2);
        CHECK(r.out.empty());
    }
}

TEST_CASE("scaling slopes at the contract values") {
    const CliRun floor2 = run({"scaling", "--d", "2", "--t", "0.5", "--method", "floor",
                               "--n-list", "100,1000,10000,100000,1000000", "--format", "csv"});
    CHECK(floor2.code == 0);
    CHECK(floor2.out.rfind("N,value\r\n", 0) == 0);
    const auto slope_pos = floor2.out.rfind("slope,");
    REQUIRE(slope_pos != std::string::npos);
    const double slope2 = std::stod(floor2.out.substr(slope_pos + 6));
    CHECK(slope2 == doctest::Approx(-1.5).epsilon(0.034));

    // Fibonacci point counts, where the golden-height minimum recurs
    // with a fixed prefactor
    const json floor1 = report(run({"scaling", "--d", "1", "--t", "-0.36237489008048013",
                                    "--method", "floor", "--n-list", "144,1597,17711,196418"}));
    CHECK(floor1.at("outputs").at("slope").get<double>() == doctest::Approx(-4.0).epsilon(0.025));

    const json mc = report(run({"scaling", "--d", "2", "--t", "0.5", "--method", "mc",
                                "--n-list", "100,316,1000,3162,10000", "--samples", "4000",
                                "--configs", "12", "--seed", "1"}));
    CHECK(mc.at("outputs").at("slope").get<double>() == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(mc.at("outputs").at("rows").size() == 5);
}

TEST_CASE("scaling is deterministic for a fixed seed") {
    const std::vector<std::string> args{"scaling", "--d", "2", "--t", "0.5", "--method", "mc",
                                        "--n-list", "50,200", "--samples", "2000",
                                        "--configs", "2", "--seed", "9"};
    const CliRun a = run(args);
    const CliRun b = run(args);
    CHECK(a.code == 0);
    CHECK(canonical(a.out) == canonical(b.out));
}

TEST_CASE("scaling usage errors") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"scaling", "--d", "2", "--t", "0.5", "--method", "floor", "--n-list", "100"},
             {"scaling", "--d", "2", "--t", "0.5", "--method", "volume", "--n-list", "10,20"},
             {"scaling", "--d", "2", "--t", "0.5", "--method", "floor", "--n-list", "10,x"},
             {"scaling", "--d", "2", "--method", "floor", "--n-list", "10,20"},
         }) {
        const CliRun r = run(args);
        CHECK(r.code == 2);
    }
}

TEST_CASE("classify through the tool") {
    const json half = report(run({"classify", "1", "2"}));
    CHECK(half.at("outputs").at("kind") == "InVaronaSet");
    CHECK(half.at("outputs").at("lambda").at("value").get<double>() == 1.5);
    CHECK(half.at("outputs").at("certificate").at("verdict") == "GegenbadlyApproximable");

    const json third = report(run({"classify", "1", "3"}));
    CHECK(third.at("outputs").at("kind") == "NotRationalAngle");
    CHECK(third.at("outputs").at("lambda").is_null());
    CHECK(third.at("outputs").at("certificate").is_null());

    const json zero = report(run({"classify", "0", "1"}));
    CHECK(zero.at("outputs").at("kind") == "InVaronaSetButObstructed");
    CHECK(zero.at("outputs").at("certificate").at("verdict") == "FailsConditionII");

    const json one = report(run({"classify", "1", "1"}));
    CHECK(one.at("outputs").at("kind") == "BoundaryExcluded");

    const json reduced = report(run({"classify", "2", "8"}));
    CHECK(reduced.at("outputs").at("kind") == "InVaronaSet");

    CHECK(run({"classify", "5", "4"}).code == 2);
    CHECK(run({"classify", "-1", "4"}).code == 2);
    CHECK(run({"classify", "1", "0"}).code == 2);
}

TEST_CASE("reports validate against the shipped schema") {
    check_against_schema(report(run({"eval", "--n", "2", "--lambda", "3/2", "--x", "0.5"})));
    check_against_schema(report(run({"certify", "1", "3", "3/2"})));
    check_against_schema(report(run({"discrepancy", "--method", "floor", "--d", "2", "--t",
                                     "0.5", "--n-points", "100"})));
    check_against_schema(report(run({"scaling", "--d", "2", "--t", "0.5", "--method", "floor",
                                     "--n-list", "100,1000"})));
    check_against_schema(report(run({"classify", "1", "2"})));
}

TEST_CASE("help and top-level usage") {
    const CliRun help = run({"--help"});
    CHECK(help.code == 0);
    for (const char* name : {"eval", "certify", "figure1", "discrepancy", "scaling", "classify"})
        CHECK(help.out.find(name) != std::string::npos);

    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("mc discrepancy reruns are byte-identical") {
    const std::vector<std::string> args{"discrepancy", "--generate", "random", "30", "--d", "3",
                                        "--t", "0.2", "--method", "mc", "--samples", "2000",
                                        "--seed", "5"};
    const CliRun a = run(args);
    const CliRun b = run(args);
    CHECK(canonical(a.out) == canonical(b.out));
    const json rep = json::parse(a.out);
    CHECK(rep.at("outputs").at("seed").get<std::uint64_t>() == 5);
}
