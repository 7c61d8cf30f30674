#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "loschmidt/curve.hpp"

namespace {

std::string cli() { return LOSCHMIDT_CLI_PATH; }

int run(const std::string& args, const std::string& out_file) {
    const std::string cmd = cli() + " " + args + " >" + out_file + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

loschmidt::FidelityCurve read_file(const std::string& path) {
    std::ifstream f(path);
    return loschmidt::read_curve(f);
}

}  // namespace

TEST_CASE("qcurve reproduces the stable recurrence structure") {
    const std::string out = "/tmp/loschmidt_q1.csv";
    REQUIRE(run("qcurve --eps +1 --g 1 --mode 1,0,-1,1 --t 0:6.283:512", out) == 0);
    const auto curve = read_file(out);
    REQUIRE(curve.samples.size() == 512);
    CHECK(curve.samples.front().value == Catch::Approx(1.0).margin(1e-12));
    double min_v = 2.0, near_pi = 0.0;
    for (const auto& s : curve.samples) {
        min_v = std::min(min_v, s.value);
        if (std::fabs(s.t - 3.14159) < 0.01) near_pi = std::max(near_pi, s.value);
    }
    CHECK(near_pi > 0.9999);                       // recurrence at t = pi
    CHECK(min_v == Catch::Approx(1.0 / 3.0).margin(1e-3));  // family minimum
}

TEST_CASE("qcurve unstable symmetric curve is even in t") {
    const std::string out = "/tmp/loschmidt_q2.csv";
    REQUIRE(run("qcurve --eps -1 --g 1 --mode 1,0,0,1 --t -8:8:257", out) == 0);
    const auto curve = read_file(out);
    REQUIRE(curve.samples.size() == 257);
    for (std::size_t i = 0; i < curve.samples.size() / 2; ++i) {
        const auto& a = curve.samples[i];
        const auto& b = curve.samples[curve.samples.size() - 1 - i];
        CHECK(a.value == Catch::Approx(b.value).margin(1e-10));
    }
}

TEST_CASE("qcurve with g = 0 is constant one") {
    const std::string out = "/tmp/loschmidt_q3.csv";
    REQUIRE(run("qcurve --eps +1 --g 0 --t 0:6.283:64", out) == 0);
    const auto curve = read_file(out);
    for (const auto& s : curve.samples) CHECK(s.value == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("qcurve rejects a non-symplectic mode with exit code 2") {
    const std::string out = "/tmp/loschmidt_q4.txt";
    CHECK(run("qcurve --eps +1 --g 1 --mode 1,0,0,2", out) == 2);
    CHECK(slurp(out).find("Wronskian") != std::string::npos);
}

TEST_CASE("curve files round-trip bit-for-bit through a re-run") {
    const std::string out1 = "/tmp/loschmidt_rt1.csv";
    const std::string out2 = "/tmp/loschmidt_rt2.csv";
    const std::string args =
        "ccurve --eps -1 --g 1 --dist ball --t -2:2:9 --samples 50000 --seed 77 "
        "--threads 2";
    REQUIRE(run(args, out1) == 0);
    REQUIRE(run(args, out2) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(!slurp(out1).empty());

    const std::string qargs = "qcurve --eps +1 --g 1.0 --t 0:6.283:33";
    REQUIRE(run(qargs, out1) == 0);
    REQUIRE(run(qargs, out2) == 0);
    CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("ccurve emits quantum overlay in the same file when asked") {
    const std::string out = "/tmp/loschmidt_overlay.csv";
    REQUIRE(run("ccurve --eps -1 --g 1 --dist gaussian --t -2:2:9 --with-quantum "
                "--mode 1,0,0,1",
                out) == 0);
    const std::string body = slurp(out);
    CHECK(body.find("# family: classical") != std::string::npos);
    CHECK(body.find("# family: quantum") != std::string::npos);
}

TEST_CASE("ccurve weak-coupling ball values respect the uniform bound") {
    const std::string out = "/tmp/loschmidt_c2.csv";
    REQUIRE(run("ccurve --eps +1 --g 0.2 --dist ball --t 0:3.1416:9 --samples 200000",
                out) == 0);
    const auto curve = read_file(out);
    const double bound = 1.0 - 0.4 * std::sqrt(2.0);
    for (const auto& s : curve.samples) CHECK(s.value >= bound - 3.0 * s.error);
}

TEST_CASE("svg rendering writes a plausible vector file") {
    const std::string out = "/tmp/loschmidt_svg.csv";
    const std::string svg = "/tmp/loschmidt_svg.svg";
    REQUIRE(run("qcurve --eps +1 --g 1 --t 0:6.283:65 --svg " + svg, out) == 0);
    const std::string body = slurp(svg);
    CHECK(body.find("<svg") != std::string::npos);
    CHECK(body.find("<polyline") != std::string::npos);
}

TEST_CASE("coeffs prints the finite families and the g = 0 degenerate case") {
    const std::string out = "/tmp/loschmidt_k1.txt";
    REQUIRE(run("coeffs --g 1", out) == 0);
    const auto body = slurp(out);
    CHECK(body.find("exact=yes") != std::string::npos);
    double w0 = 0.0, w2 = 0.0;
    std::sscanf(slurp(out).substr(body.find("\n0,")).c_str(), "\n0,%lf", &w0);
    std::sscanf(slurp(out).substr(body.find("\n2,")).c_str(), "\n2,%lf", &w2);
    CHECK(w0 == Catch::Approx(1.0 / 3.0).margin(1e-12));
    CHECK(w2 == Catch::Approx(2.0 / 3.0).margin(1e-12));

    REQUIRE(run("coeffs --g 0", out) == 0);
    CHECK(slurp(out).find("1,1,1") != std::string::npos);
}

TEST_CASE("coeffs normalizes generic couplings to unit mass") {
    const std::string out = "/tmp/loschmidt_k2.txt";
    REQUIRE(run("coeffs --g 1.3 --nmax 200", out) == 0);
    const auto body = slurp(out);
    // last cumulative entry is the total mass
    const auto pos = body.find_last_of(',');
    const double total = std::stod(body.substr(pos + 1));
    CHECK(std::fabs(total - 1.0) < 1e-8);
}

TEST_CASE("verify subcommand filters, reproduces and fails deliberately") {
    const std::string out1 = "/tmp/loschmidt_v1.txt";
    const std::string out2 = "/tmp/loschmidt_v2.txt";
    REQUIRE(run("verify --only lemma3.2.recurrence --seed 42", out1) == 0);
    CHECK(slurp(out1).find("pass") != std::string::npos);

    REQUIRE(run("verify --only lemma3.2.recurrence,eq3.6.identity --seed 42 --format kv",
                out1) == 0);
    REQUIRE(run("verify --only lemma3.2.recurrence,eq3.6.identity --seed 42 --format kv",
                out2) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(out1).find("check.eq3.6.identity.status=pass") != std::string::npos);

    CHECK(run("verify --only bogus.check", out1) == 2);
    CHECK(run("verify --only prop6.3.ball --radius 1 --samples 50000 --grid 4", out1) == 1);
}
