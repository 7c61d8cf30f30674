#pragma once

// Classical fidelity: the phase-space overlap
//   F(t) = int rho(p(t), q(t)) rho(ydot'(t), y'(t)) dq dp
// between a distribution pushed through the unperturbed flow and through
// the flow perturbed by g^2/q^2, for Gaussian and disk-indicator rho.
//
// Stable case (eps = +1): energy conservation collapses the Gaussian
// integrand to exp(-(1/s)[q^2 + p^2 + g^2/q^2 - g^2/y'^2]); the indicator
// case is sampled by stratified Monte-Carlo on the initial disk.
//
// Unstable case (eps = -1): the change of variables
//   v = sqrt(cosh 2t)(p + q tanh 2t),  u = q / sqrt(cosh 2t)
// has unit Jacobian and gives x^2 + xdot^2 = u^2 + v^2 and
//   y'^2 + ydot'^2 = u^2 + v^2 + 2g^2/u^2 - 4g^2/D,
//   D = 2 y'^2 = u^2(1+tau) + v^2(1-tau) + 2uv sgn(t) sqrt(1-tau^2)
//       + (1-tau) 2g^2/u^2,          tau = 1/cosh 2t in [0, 1],
// so t = +-inf is the regular parameter value tau = 0, evaluated exactly
// rather than by a large finite time. A direct trajectory-based route is
// kept alongside the reduced forms as an independent cross-check.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "loschmidt/curve.hpp"
#include "loschmidt/detail/parallel.hpp"
#include "loschmidt/dynamics.hpp"
#include "loschmidt/quadrature.hpp"

namespace loschmidt {

// rho(p, q) = (pi s)^(-1/2) exp(-(p^2+q^2)/(2s)); scale s = g sqrt(2) gives
// the rescaled, g-independent family.
struct GaussianDist {
    double scale = 1.0;
};

// rho(p, q) = (sqrt(pi) r)^(-1) chi(p^2 + q^2 <= r^2); r = 1 in the stable
// case, r = sqrt(3) in the unstable one.
struct BallDist {
    double radius = 1.0;
};

using PhaseSpaceDistribution = std::variant<GaussianDist, BallDist>;

inline double distribution_norm(const PhaseSpaceDistribution& dist) {
    if (const auto* gauss = std::get_if<GaussianDist>(&dist)) {
        if (!(gauss->scale > 0.0)) throw std::invalid_argument("Gaussian scale must be > 0");
        return 1.0 / std::sqrt(std::numbers::pi * gauss->scale);
    }
    const auto& ball = std::get<BallDist>(dist);
    if (!(ball.radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
    return 1.0 / (std::sqrt(std::numbers::pi) * ball.radius);
}

inline double distribution_eval(const PhaseSpaceDistribution& dist, double p, double q) {
    const double norm = distribution_norm(dist);
    if (const auto* gauss = std::get_if<GaussianDist>(&dist))
        return norm * std::exp(-(p * p + q * q) / (2.0 * gauss->scale));
    const auto& ball = std::get<BallDist>(dist);
    return p * p + q * q <= ball.radius * ball.radius ? norm : 0.0;
}

enum class FidelityRoute { reduced, direct };

struct ClassicalFidelityOptions {
    double tol = 1e-8;
    FidelityRoute route = FidelityRoute::reduced;
    std::optional<Method2D> method;  // default: quadrature for Gaussian, MC for ball
    MonteCarloOptions mc;
    int threads = 0;  // grid evaluation; 0 = hardware
};

namespace detail {

// breakpoints taming exp(-g^2/(s q^2)): below |q| = g/sqrt(36 s) the factor
// is under machine epsilon
inline std::vector<double> singular_axis_breakpoints(double g, double s) {
    if (g == 0.0) return {};
    const double cut = g / std::sqrt(36.0 * s);
    return {-cut, 0.0, cut};
}

inline double stable_y2(double q, double p, double g, double t) {
    const double x = q * std::cos(t) + p * std::sin(t);
    const double st = std::sin(t);
    return x * x + 2.0 * g * g * st * st / (q * q);
}

// reduced stable Gaussian integrand including the (pi s)^-1 prefactor
inline double stable_gaussian_integrand(double q, double p, double g, double s,
                                        double t) {
    const double norm = 1.0 / (std::numbers::pi * s);
    if (g == 0.0) return norm * std::exp(-(q * q + p * p) / s);
    if (q == 0.0) return 0.0;
    const double y2 = stable_y2(q, p, g, t);
    const double expo = -(q * q + p * p + g * g / (q * q) - g * g / y2) / s;
    return norm * std::exp(expo);
}

struct UnstableReduced {
    double g;
    double tau;   // 1/cosh 2t, 0 = infinite time
    double sign;  // sign of t (cross-term orientation)

    double quadratic_d(double u, double v) const {
        const double root = sign * std::sqrt(std::max(0.0, 1.0 - tau * tau));
        return u * u * (1.0 + tau) + v * v * (1.0 - tau) + 2.0 * u * v * root +
               (1.0 - tau) * 2.0 * g * g / (u * u);
    }
    // y'^2 + ydot'^2 expressed in (u, v)
    double perturbed_energy_pair(double u, double v) const {
        return u * u + v * v + 2.0 * g * g / (u * u) -
               4.0 * g * g / quadratic_d(u, v);
    }
};

inline double unstable_gaussian_integrand(double u, double v, double g, double s,
                                          const UnstableReduced& red) {
    const double norm = 1.0 / (std::numbers::pi * s);
    if (g == 0.0) return norm * std::exp(-(u * u + v * v) / s);
    if (u == 0.0) return 0.0;
    const double pair = red.perturbed_energy_pair(u, v);
    return norm * std::exp(-0.5 * (u * u + v * v + pair) / s);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed ^ (0xd1342543de82ef95ULL * (salt + 1));
    return splitmix64(s);
}

}  // namespace detail

// --- reduced closed-form evaluators -----------------------------------------

// Stable Gaussian overlap by iterated adaptive quadrature.
inline QuadratureResult stable_gaussian_fidelity(double g, double scale, double t,
                                                 double tol = 1e-8) {
    Integrate2DOptions opts;
    opts.tol = tol;
    opts.x_breakpoints = detail::singular_axis_breakpoints(g, scale);
    return integrate_2d(
        [=](double q, double p) {
            return detail::stable_gaussian_integrand(q, p, g, scale, t);
        },
        PlaneDomain{}, Method2D::quadrature, opts);
}

// Unstable Gaussian overlap in the (u, v, tau) form; tau = 0 is t = inf.
inline QuadratureResult unstable_gaussian_tau(double g, double scale, double tau,
                                              double sign = 1.0, double tol = 1e-8) {
    if (tau < 0.0 || tau > 1.0)
        throw std::invalid_argument("unstable_gaussian_tau: tau must lie in [0, 1]");
    const detail::UnstableReduced red{g, tau, sign};
    Integrate2DOptions opts;
    opts.tol = tol;
    opts.x_breakpoints = detail::singular_axis_breakpoints(g, scale);
    return integrate_2d(
        [=](double u, double v) {
            return detail::unstable_gaussian_integrand(u, v, g, scale, red);
        },
        PlaneDomain{}, Method2D::quadrature, opts);
}

// Stable ball overlap: stratified Monte-Carlo on the initial disk; the
// second indicator uses the energy identity
// y'^2 + ydot'^2 = p^2 + q^2 + 2g^2/q^2 - 2g^2/y'^2.
inline QuadratureResult stable_ball_fidelity(double g, double radius, double t,
                                             const MonteCarloOptions& mc = {}) {
    const double r2 = radius * radius;
    const double norm = 1.0 / (std::numbers::pi * r2);
    auto f = [=](double q, double p) {
        if (q * q + p * p > r2) return 0.0;
        if (g == 0.0) return norm;
        if (q == 0.0) return 0.0;
        const double y2 = detail::stable_y2(q, p, g, t);
        const double pair = p * p + q * q + 2.0 * g * g / (q * q) - 2.0 * g * g / y2;
        return pair <= r2 ? norm : 0.0;
    };
    Integrate2DOptions opts;
    opts.mc = mc;
    return integrate_2d(f, make_disk(radius), Method2D::monte_carlo, opts);
}

// Unstable ball overlap in (u, v, tau); both indicators live on the fixed
// disk u^2 + v^2 <= r^2 so the sampling region never degenerates with t.
inline QuadratureResult unstable_ball_tau(double g, double radius, double tau,
                                          double sign = 1.0,
                                          const MonteCarloOptions& mc = {}) {
    if (tau < 0.0 || tau > 1.0)
        throw std::invalid_argument("unstable_ball_tau: tau must lie in [0, 1]");
    const double r2 = radius * radius;
    const double norm = 1.0 / (std::numbers::pi * r2);
    const detail::UnstableReduced red{g, tau, sign};
    auto f = [=](double u, double v) {
        if (u * u + v * v > r2) return 0.0;
        if (g == 0.0) return norm;
        if (u == 0.0) return 0.0;
        return red.perturbed_energy_pair(u, v) <= r2 ? norm : 0.0;
    };
    Integrate2DOptions opts;
    opts.mc = mc;
    return integrate_2d(f, make_disk(radius), Method2D::monte_carlo, opts);
}

// --- direct trajectory-based routes (independent cross-checks) --------------

inline QuadratureResult direct_gaussian_fidelity(int epsilon, double g, double scale,
                                                 double t, double tol = 1e-8) {
    const PhaseSpaceDistribution rho = GaussianDist{scale};
    Integrate2DOptions opts;
    opts.tol = tol;
    opts.x_breakpoints = detail::singular_axis_breakpoints(g, scale);
    return integrate_2d(
        [=](double q, double p) {
            if (q == 0.0 && g != 0.0) return 0.0;
            const PhasePoint x = unperturbed_trajectory(q, p, epsilon, t);
            const PhasePoint y = perturbed_trajectory(q, p, g, epsilon, t);
            return distribution_eval(rho, x.p, x.q) * distribution_eval(rho, y.p, y.q);
        },
        PlaneDomain{}, Method2D::quadrature, opts);
}

inline QuadratureResult direct_ball_fidelity(int epsilon, double g, double radius,
                                             double t, const MonteCarloOptions& mc = {}) {
    const PhaseSpaceDistribution rho = BallDist{radius};
    // support of rho(x(t), xdot(t)) fits in a box of half-width r e^{|t|}
    const double L = epsilon == 1 ? radius : radius * std::exp(std::fabs(t)) * 1.001;
    return integrate_2d(
        [=](double q, double p) {
            if (q == 0.0 && g != 0.0) return 0.0;
            const PhasePoint x = unperturbed_trajectory(q, p, epsilon, t);
            const PhasePoint y = perturbed_trajectory(q, p, g, epsilon, t);
            return distribution_eval(rho, x.p, x.q) * distribution_eval(rho, y.p, y.q);
        },
        make_rect(-L, L, -L, L), Method2D::monte_carlo,
        Integrate2DOptions{.mc = mc});
}

// --- public fidelity entry points --------------------------------------------

inline QuadratureResult classical_fidelity(int epsilon, double g,
                                           const PhaseSpaceDistribution& dist, double t,
                                           const ClassicalFidelityOptions& options = {}) {
    if (epsilon != 1 && epsilon != -1)
        throw std::invalid_argument("classical_fidelity: epsilon must be +1 or -1");
    if (!(options.tol > 0.0))
        throw std::invalid_argument("classical_fidelity: tol must be > 0");
    g = std::fabs(g);

    const bool is_ball = std::holds_alternative<BallDist>(dist);
    const Method2D method =
        options.method.value_or(is_ball ? Method2D::monte_carlo : Method2D::quadrature);
    if (is_ball && method == Method2D::quadrature)
        throw std::invalid_argument(
            "classical_fidelity: indicator distributions require monte-carlo");

    if (options.route == FidelityRoute::direct) {
        if (is_ball)
            return direct_ball_fidelity(epsilon, g, std::get<BallDist>(dist).radius, t,
                                        options.mc);
        return direct_gaussian_fidelity(epsilon, g, std::get<GaussianDist>(dist).scale,
                                        t, options.tol);
    }

    if (is_ball) {
        const double r = std::get<BallDist>(dist).radius;
        if (epsilon == 1) return stable_ball_fidelity(g, r, t, options.mc);
        const double tau = 1.0 / std::cosh(2.0 * t);
        return unstable_ball_tau(g, r, tau, t < 0.0 ? -1.0 : 1.0, options.mc);
    }

    const double s = std::get<GaussianDist>(dist).scale;
    if (method == Method2D::monte_carlo) {
        // plain importance sampling against a unit Gaussian proposal
        Integrate2DOptions opts;
        opts.mc = options.mc;
        if (epsilon == 1)
            return integrate_2d(
                [=](double q, double p) {
                    return detail::stable_gaussian_integrand(q, p, g, s, t);
                },
                PlaneDomain{}, Method2D::monte_carlo, opts);
        const detail::UnstableReduced red{g, 1.0 / std::cosh(2.0 * t),
                                          t < 0.0 ? -1.0 : 1.0};
        return integrate_2d(
            [=](double u, double v) {
                return detail::unstable_gaussian_integrand(u, v, g, s, red);
            },
            PlaneDomain{}, Method2D::monte_carlo, opts);
    }
    if (epsilon == 1) return stable_gaussian_fidelity(g, s, t, options.tol);
    const double tau = 1.0 / std::cosh(2.0 * t);
    return unstable_gaussian_tau(g, s, tau, t < 0.0 ? -1.0 : 1.0, options.tol);
}

inline FidelityCurve classical_fidelity_curve(int epsilon, double g,
                                              const PhaseSpaceDistribution& dist,
                                              std::span<const double> grid,
                                              const ClassicalFidelityOptions& options = {}) {
    FidelityCurve curve;
    curve.meta.family = "classical";
    curve.meta.epsilon = epsilon;
    curve.meta.g = std::fabs(g);
    curve.meta.seed = options.mc.seed;
    if (const auto* gauss = std::get_if<GaussianDist>(&dist)) {
        curve.meta.distribution = "gaussian scale=" + detail::fmt17(gauss->scale);
        curve.meta.method =
            options.method.value_or(Method2D::quadrature) == Method2D::quadrature
                ? "quadrature"
                : "monte-carlo";
    } else {
        curve.meta.distribution =
            "ball radius=" + detail::fmt17(std::get<BallDist>(dist).radius);
        curve.meta.method = "monte-carlo";
        curve.meta.mc_samples = options.mc.samples;
    }
    curve.samples.resize(grid.size());
    detail::parallel_for(
        grid.size(),
        [&](std::size_t i) {
            ClassicalFidelityOptions per = options;
            per.mc.seed = detail::mix_seed(options.mc.seed, i);
            const QuadratureResult r =
                classical_fidelity(epsilon, g, dist, grid[i], per);
            curve.samples[i] = {grid[i], r.value, r.error_estimate};
        },
        options.threads);
    return curve;
}

// --- bound reports ------------------------------------------------------------

struct BoundEntry {
    std::string check;
    double t;
    double value;
    double bound;
    double margin;     // signed; >= -tolerance means the claim holds
    double tolerance;  // numerical allowance (3 sigma or quadrature error)
    bool vacuous;      // bound weaker than the trivial value range
};

struct BoundReport {
    std::vector<BoundEntry> entries;

    bool all_hold() const {
        for (const auto& e : entries)
            if (e.margin < -e.tolerance) return false;
        return true;
    }
    double min_margin() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& e : entries) m = std::min(m, e.margin);
        return m;
    }
};

// Stable-case estimates: e^{-2g} <= F_C(t) <= min(1, sqrt2 exp(-g |sin t| /
// sqrt(1 + sin^2 t))), the indicator lower bound 1 - 2 g sqrt2, and the
// vanishing of the indicator overlap at t = pi/2 once g >= 1/sqrt2.
inline BoundReport bound_check_stable(double g, std::span<const double> grid,
                                      const ClassicalFidelityOptions& options = {}) {
    g = std::fabs(g);
    BoundReport report;
    const double lower = std::exp(-2.0 * g);
    const double ball_lower = 1.0 - 2.0 * g * std::sqrt(2.0);

    std::vector<BoundEntry> gauss_entries(grid.size() * 2);
    std::vector<BoundEntry> ball_entries(grid.size());
    detail::parallel_for(
        grid.size(),
        [&](std::size_t i) {
            const double t = grid[i];
            const QuadratureResult fc = stable_gaussian_fidelity(g, 1.0, t, options.tol);
            const double st = std::fabs(std::sin(t));
            const double upper =
                std::min(1.0, std::sqrt(2.0) * std::exp(-g * st / std::sqrt(1.0 + st * st)));
            gauss_entries[2 * i] = {"stable.gauss.lower", t,     fc.value,
                                    lower,                fc.value - lower,
                                    fc.error_estimate,    false};
            gauss_entries[2 * i + 1] = {"stable.gauss.upper", t,     fc.value,
                                        upper,                upper - fc.value,
                                        fc.error_estimate,    false};

            MonteCarloOptions mc = options.mc;
            mc.seed = detail::mix_seed(options.mc.seed, 1000 + i);
            const QuadratureResult fb = stable_ball_fidelity(g, 1.0, t, mc);
            ball_entries[i] = {"stable.ball.lower",  t,
                               fb.value,             ball_lower,
                               fb.value - ball_lower, 3.0 * fb.error_estimate,
                               ball_lower <= 0.0};
        },
        options.threads);
    report.entries.insert(report.entries.end(), gauss_entries.begin(), gauss_entries.end());
    report.entries.insert(report.entries.end(), ball_entries.begin(), ball_entries.end());

    if (g >= 1.0 / std::sqrt(2.0) - 1e-12) {
        MonteCarloOptions mc = options.mc;
        mc.seed = detail::mix_seed(options.mc.seed, 999);
        const QuadratureResult fb =
            stable_ball_fidelity(g, 1.0, 0.5 * std::numbers::pi, mc);
        report.entries.push_back({"stable.ball.vanish", 0.5 * std::numbers::pi, fb.value,
                                  0.0, -fb.value, 3.0 * fb.error_estimate, false});
    }
    return report;
}

// Unstable-case estimates: G_C(t,g) >= e^{-2g}, the radius-sqrt3 indicator
// lower bound 1 - 2 g sqrt2 / 3, the g-independent floors e^{-sqrt2} and
// 1/3, and the t = inf indicator value against its closed-form area bound
// 2 arctan(sqrt 17)/pi - sqrt(17)/(9 pi).
inline BoundReport bound_check_unstable(double g, std::span<const double> grid,
                                        const ClassicalFidelityOptions& options = {},
                                        double ball_radius = std::numbers::sqrt3) {
    g = std::fabs(g);
    BoundReport report;
    const double sq2 = std::sqrt(2.0);
    const double g_indep = 1.0 / sq2;
    const double lower = std::exp(-2.0 * g);
    const double ball_lower = 1.0 - 2.0 * g * sq2 / 3.0;

    std::vector<BoundEntry> entries(grid.size() * 4);
    detail::parallel_for(
        grid.size(),
        [&](std::size_t i) {
            const double t = grid[i];
            const double tau = 1.0 / std::cosh(2.0 * t);
            const double sign = t < 0.0 ? -1.0 : 1.0;

            const QuadratureResult gc = unstable_gaussian_tau(g, 1.0, tau, sign, options.tol);
            entries[4 * i] = {"unstable.gauss.lower", t,     gc.value,
                              lower,                  gc.value - lower,
                              gc.error_estimate,      false};

            MonteCarloOptions mc = options.mc;
            mc.seed = detail::mix_seed(options.mc.seed, 2000 + i);
            const QuadratureResult gb = unstable_ball_tau(g, ball_radius, tau, sign, mc);
            entries[4 * i + 1] = {"unstable.ball.lower",  t,
                                  gb.value,               ball_lower,
                                  gb.value - ball_lower,  3.0 * gb.error_estimate,
                                  ball_lower <= 0.0};

            const QuadratureResult gci =
                unstable_gaussian_tau(g_indep, 1.0, tau, sign, options.tol);
            const double floor_gauss = std::exp(-sq2);
            entries[4 * i + 2] = {"unstable.gindep.gauss.lower", t,
                                  gci.value,                     floor_gauss,
                                  gci.value - floor_gauss,       gci.error_estimate,
                                  false};

            mc.seed = detail::mix_seed(options.mc.seed, 3000 + i);
            const QuadratureResult gbi = unstable_ball_tau(g_indep, ball_radius, tau, sign, mc);
            entries[4 * i + 3] = {"unstable.gindep.ball.lower", t,
                                  gbi.value,                    1.0 / 3.0,
                                  gbi.value - 1.0 / 3.0,        3.0 * gbi.error_estimate,
                                  false};
        },
        options.threads);
    report.entries = std::move(entries);

    MonteCarloOptions mc = options.mc;
    mc.seed = detail::mix_seed(options.mc.seed, 4000);
    const QuadratureResult asym = unstable_ball_tau(g_indep, ball_radius, 0.0, 1.0, mc);
    const double area_bound = 2.0 * std::atan(std::sqrt(17.0)) / std::numbers::pi -
                              std::sqrt(17.0) / (9.0 * std::numbers::pi);
    report.entries.push_back({"unstable.ball.asymptote.upper",
                              std::numeric_limits<double>::infinity(), asym.value,
                              area_bound, area_bound - asym.value,
                              3.0 * asym.error_estimate, false});
    return report;
}

// --- asymptotics and the cusp ---------------------------------------------------

enum class AsymptoticCase { gaussian, ball };

// t -> inf value of the g-independent unstable fidelities, evaluated at
// tau = 0 exactly.
inline QuadratureResult asymptotic_value(AsymptoticCase which,
                                         const ClassicalFidelityOptions& options = {}) {
    const double g = 1.0 / std::sqrt(2.0);
    if (which == AsymptoticCase::gaussian)
        return unstable_gaussian_tau(g, 1.0, 0.0, 1.0, options.tol);
    return unstable_ball_tau(g, std::sqrt(3.0), 0.0, 1.0, options.mc);
}

struct CuspOptions {
    double window_lo = 1e-2;
    double window_hi = 1e-1;
    int halvings = 3;
    int points = 16;
    double tol = 1e-10;
};

// Fits log F_C(t) ~ -s |t| of the g-independent stable Gaussian fidelity on
// a sequence of halved windows. The decay near t = 0 is faster than any
// single exponential, so the fitted slopes must grow as the window shrinks;
// returning the whole sequence lets callers assert exactly that.
inline std::vector<double> cusp_slopes(const CuspOptions& options = {}) {
    if (!(options.window_lo > 0.0) || !(options.window_hi > options.window_lo))
        throw std::invalid_argument("cusp_slopes: windows must be positive and ordered");
    if (options.points < 4) throw std::invalid_argument("cusp_slopes: too few points");
    const double g = 1.0 / std::sqrt(2.0);
    std::vector<double> slopes;
    for (int k = 0; k <= options.halvings; ++k) {
        const double lo = options.window_lo / (1 << k);
        const double hi = options.window_hi / (1 << k);
        const double ratio = std::pow(hi / lo, 1.0 / (options.points - 1));
        double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
        for (int i = 0; i < options.points; ++i) {
            const double t = lo * std::pow(ratio, i);
            const double f = stable_gaussian_fidelity(g, 1.0, t, options.tol).value;
            if (!(f > 0.0)) throw std::runtime_error("cusp_slopes: non-positive fidelity");
            const double y = std::log(f);
            sum_t += t;
            sum_y += y;
            sum_tt += t * t;
            sum_ty += t * y;
        }
        const int n = options.points;
        const double denom = n * sum_tt - sum_t * sum_t;
        if (denom == 0.0) throw std::runtime_error("cusp_slopes: degenerate window");
        slopes.push_back(-(n * sum_ty - sum_t * sum_y) / denom);
    }
    return slopes;
}

}  // namespace loschmidt
