// Command-line frontend: fidelity curves, spectral coefficients, and the
// verification report. Exit codes: 0 success, 1 verification failure,
// 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "loschmidt/classical_fidelity.hpp"
#include "loschmidt/curve.hpp"
#include "loschmidt/quantum_fidelity.hpp"
#include "loschmidt/svg.hpp"
#include "loschmidt/verify.hpp"

namespace {

using namespace loschmidt;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_grid(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    char colon1 = 0, colon2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> lo >> colon1 >> hi >> colon2 >> count) || colon1 != ':' ||
        colon2 != ':' || count < 2 || !(hi > lo))
        throw UsageError("bad grid spec '" + spec + "'; expected start:end:count");
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) grid[i] = lo + (hi - lo) * i / (count - 1.0);
    return grid;
}

ModeSpec parse_mode(const std::string& spec, int eps) {
    std::array<double, 4> v{};
    std::istringstream ss(spec);
    std::string part;
    for (int i = 0; i < 4; ++i) {
        if (!std::getline(ss, part, ','))
            throw UsageError("bad mode spec '" + spec + "'; expected a,b,c,d");
        v[i] = std::stod(part);
    }
    try {
        return ModeSpec(v[0], v[1], v[2], v[3], eps);
    } catch (const std::invalid_argument&) {
        throw UsageError("mode constants must satisfy the Wronskian normalization "
                         "ad - bc = 1");
    }
}

int parse_eps(const std::string& s) {
    if (s == "+1" || s == "1") return 1;
    if (s == "-1") return -1;
    throw UsageError("bad --eps '" + s + "'; expected +1 or -1");
}

void emit(const std::string& out_path, const std::string& svg_path,
          const std::vector<FidelityCurve>& curves, const std::string& title) {
    std::ostringstream body;
    for (const auto& c : curves) write_curve(body, c);
    if (out_path.empty() || out_path == "-") {
        std::cout << body.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot write " + out_path);
        f << body.str();
    }
    if (!svg_path.empty()) {
        std::ofstream f(svg_path);
        if (!f) throw std::runtime_error("cannot write " + svg_path);
        SvgOptions opts;
        opts.title = title;
        write_svg(f, curves, opts);
    }
}

struct QcurveArgs {
    std::string eps = "+1";
    double g = 1.0;
    std::string mode = "1,0,0,1";
    std::string grid;
    std::string out, svg;
};

int run_qcurve(const QcurveArgs& args) {
    const int eps = parse_eps(args.eps);
    const ModeSpec mode = parse_mode(args.mode, eps);
    const std::string grid_spec =
        args.grid.empty() ? (eps == 1 ? "0:6.2832:512" : "-8:8:512") : args.grid;
    const auto grid = parse_grid(grid_spec);
    FidelityCurve curve = quantum_fidelity_curve(mode, args.g, grid);
    curve.meta.grid = grid_spec;
    emit(args.out, args.svg, {curve},
         std::string("quantum fidelity, eps=") + (eps > 0 ? "+1" : "-1"));
    return 0;
}

struct CcurveArgs {
    std::string eps = "+1";
    double g = 1.0;
    std::string dist = "gaussian";
    double scale = 1.0;
    double radius = 0.0;  // 0 = default per case
    bool rescaled = false;
    std::string grid;
    std::string method = "auto";
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 20250810;
    double tol = 1e-8;
    bool with_quantum = false;
    std::string mode = "1,0,0,1";
    std::string out, svg;
    int threads = 0;
};

int run_ccurve(const CcurveArgs& args) {
    const int eps = parse_eps(args.eps);
    double g = args.g;

    PhaseSpaceDistribution dist;
    if (args.dist == "gaussian") {
        double scale = args.scale;
        if (args.rescaled) {
            // rescaled family: g-independent, equals coupling 1/sqrt2 at unit scale
            g = 1.0 / std::numbers::sqrt2;
            scale = 1.0;
        }
        dist = GaussianDist{scale};
    } else if (args.dist == "ball") {
        double radius = args.radius;
        if (radius <= 0.0) radius = eps == 1 ? 1.0 : std::numbers::sqrt3;
        if (args.rescaled) g = 1.0 / std::numbers::sqrt2;
        dist = BallDist{radius};
    } else {
        throw UsageError("bad --dist '" + args.dist + "'; expected gaussian or ball");
    }

    const std::string grid_spec =
        args.grid.empty() ? (eps == 1 ? "0:3.1416:512" : "-8:8:512") : args.grid;
    const auto grid = parse_grid(grid_spec);

    ClassicalFidelityOptions opts;
    opts.tol = args.tol;
    opts.mc.samples = args.samples;
    opts.mc.seed = args.seed;
    opts.threads = args.threads;
    if (args.method == "quad")
        opts.method = Method2D::quadrature;
    else if (args.method == "mc")
        opts.method = Method2D::monte_carlo;
    else if (args.method != "auto")
        throw UsageError("bad --method '" + args.method + "'; expected auto, quad or mc");

    FidelityCurve curve = classical_fidelity_curve(eps, g, dist, grid, opts);
    curve.meta.grid = grid_spec;

    std::vector<FidelityCurve> curves{curve};
    if (args.with_quantum) {
        const ModeSpec mode = parse_mode(args.mode, eps);
        FidelityCurve qc = quantum_fidelity_curve(mode, args.g, grid);
        qc.meta.grid = grid_spec;
        curves.push_back(std::move(qc));
    }
    emit(args.out, args.svg, curves,
         std::string("classical fidelity, eps=") + (eps > 0 ? "+1" : "-1"));
    return 0;
}

struct CoeffsArgs {
    double g = 1.0;
    int nmax = 200;
    double tol = 1e-6;
    std::string out;
};

int run_coeffs(const CoeffsArgs& args) {
    const CouplingAlpha ca = alpha_from_g(args.g);
    const bool integer = std::fabs(ca.alpha - std::round(ca.alpha)) < 1e-9;
    const SpectralWeights sw =
        integer ? spectral_weights_exact(args.g)
                : spectral_weights_quadrature(args.g, args.nmax, 1.0);

    std::ostringstream os;
    os << "# spectral weights |lambda_n|^2 of the ground state, g="
       << detail::fmt17(ca.g) << " alpha=" << detail::fmt17(ca.alpha)
       << " exact=" << (integer ? "yes" : "no") << "\n";
    if (!integer && sw.tail_mass() > args.tol)
        os << "# warning: truncation tail " << sw.tail_mass() << " above tol "
           << args.tol << " at nmax=" << args.nmax
           << " (weights renormalized to unit mass)\n";
    os << "n,weight,cumulative\n";
    double cum = 0.0;
    for (const auto& e : sw.entries()) {
        cum += e.weight;
        os << e.n << "," << detail::fmt17(e.weight) << "," << detail::fmt17(cum) << "\n";
    }
    if (args.out.empty() || args.out == "-") {
        std::cout << os.str();
    } else {
        std::ofstream f(args.out);
        if (!f) throw std::runtime_error("cannot write " + args.out);
        f << os.str();
    }
    return 0;
}

struct VerifyArgs {
    std::string only;
    std::uint64_t seed = 20250810;
    bool strict = false;
    int grid = 64;
    std::size_t samples = 1'000'000;
    double radius = std::numbers::sqrt3;
    double quad_tol = 1e-8;
    std::vector<double> g_values;
    std::string out;
    std::string format = "text";
    int threads = 0;
    bool list = false;
};

int run_verify(const VerifyArgs& args) {
    if (args.list) {
        for (const auto& id : check_registry()) std::cout << id << "\n";
        return 0;
    }
    VerifyConfig cfg;
    cfg.seed = args.seed;
    cfg.grid_points = args.grid;
    cfg.mc_samples = args.samples;
    cfg.unstable_ball_radius = args.radius;
    cfg.quad_tol = args.quad_tol;
    cfg.threads = args.threads;
    if (!args.g_values.empty()) cfg.g_values = args.g_values;

    Report report;
    report.config = cfg;
    if (args.only.empty()) {
        report = run_all(cfg);
    } else {
        std::istringstream ss(args.only);
        std::string id;
        while (std::getline(ss, id, ',')) {
            try {
                report.results.push_back(run_one(id, cfg));
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }
    }

    std::ostringstream os;
    if (args.format == "kv")
        write_report_kv(os, report);
    else if (args.format == "text")
        write_report_text(os, report);
    else
        throw UsageError("bad --format '" + args.format + "'; expected text or kv");

    if (args.out.empty() || args.out == "-") {
        std::cout << os.str();
    } else {
        std::ofstream f(args.out);
        if (!f) throw std::runtime_error("cannot write " + args.out);
        f << os.str();
    }
    return report.all_passed(args.strict) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "loschmidt: quantum and classical fidelity (Loschmidt echo) for the "
        "harmonic and inverted oscillator with an inverse-square perturbation"};
    app.require_subcommand(1);

    QcurveArgs q;
    auto* qcmd = app.add_subcommand("qcurve", "sample a quantum fidelity curve");
    qcmd->add_option("--eps", q.eps, "+1 stable / -1 unstable");
    qcmd->add_option("--g", q.g, "coupling constant");
    qcmd->add_option("--mode", q.mode, "mode constants a,b,c,d with ad-bc=1");
    qcmd->add_option("--t", q.grid, "time grid start:end:count");
    qcmd->add_option("--out", q.out, "output path (default stdout)");
    qcmd->add_option("--svg", q.svg, "also render the curve to this SVG file");

    CcurveArgs c;
    auto* ccmd = app.add_subcommand("ccurve", "sample a classical fidelity curve");
    ccmd->add_option("--eps", c.eps, "+1 stable / -1 unstable");
    ccmd->add_option("--g", c.g, "coupling constant");
    ccmd->add_option("--dist", c.dist, "gaussian or ball");
    ccmd->add_option("--scale", c.scale, "gaussian scale (default 1)");
    ccmd->add_option("--radius", c.radius, "ball radius (default 1 stable, sqrt3 unstable)");
    ccmd->add_flag("--rescaled", c.rescaled,
                   "use the rescaled, g-independent fidelity (coupling 1/sqrt2)");
    ccmd->add_option("--t", c.grid, "time grid start:end:count");
    ccmd->add_option("--method", c.method, "auto, quad or mc");
    ccmd->add_option("--samples", c.samples, "Monte-Carlo samples per point");
    ccmd->add_option("--seed", c.seed, "Monte-Carlo seed");
    ccmd->add_option("--tol", c.tol, "quadrature tolerance");
    ccmd->add_flag("--with-quantum", c.with_quantum,
                   "append the matching quantum curve to the same file");
    ccmd->add_option("--mode", c.mode, "mode constants for --with-quantum");
    ccmd->add_option("--threads", c.threads, "worker threads (0 = hardware)");
    ccmd->add_option("--out", c.out, "output path (default stdout)");
    ccmd->add_option("--svg", c.svg, "also render the curve(s) to this SVG file");

    CoeffsArgs k;
    auto* kcmd = app.add_subcommand("coeffs", "spectral weights of the ground state");
    kcmd->add_option("--g", k.g, "coupling constant");
    kcmd->add_option("--nmax", k.nmax, "eigenindex cutoff for non-integer alpha");
    kcmd->add_option("--tol", k.tol, "truncation-tail warning threshold");
    kcmd->add_option("--out", k.out, "output path (default stdout)");

    VerifyArgs v;
    auto* vcmd = app.add_subcommand("verify", "run the verification check registry");
    vcmd->add_option("--only", v.only, "comma-separated check ids (default: all)");
    vcmd->add_option("--seed", v.seed, "random seed");
    vcmd->add_flag("--strict", v.strict, "treat inconclusive checks as failures");
    vcmd->add_option("--grid", v.grid, "grid points per bound check");
    vcmd->add_option("--samples", v.samples, "Monte-Carlo samples per point");
    vcmd->add_option("--radius", v.radius, "unstable ball radius (for mutation tests)");
    vcmd->add_option("--quad-tol", v.quad_tol, "quadrature tolerance");
    vcmd->add_option("--g-values", v.g_values, "couplings for the bound grids");
    vcmd->add_option("--out", v.out, "report path (default stdout)");
    vcmd->add_option("--format", v.format, "text or kv");
    vcmd->add_option("--threads", v.threads, "worker threads (0 = hardware)");
    vcmd->add_flag("--list", v.list, "list registry ids and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*qcmd) return run_qcurve(q);
        if (*ccmd) return run_ccurve(c);
        if (*kcmd) return run_coeffs(k);
        if (*vcmd) return run_verify(v);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
