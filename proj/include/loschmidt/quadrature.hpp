#pragma once

// Adaptive 1D/2D quadrature and stratified Monte-Carlo integration.
//
// 1D: Gauss-Kronrod 7/15 panels with QUADPACK-style error estimation,
// adaptive bisection of the worst panel. Unbounded domains are mapped to
// bounded ones by rational substitutions; integrands with an essential
// singularity at an interior point (e.g. exp(-B/x^2) at x=0) are handled
// by seeding panel boundaries at caller-supplied breakpoints.
//
// 2D: iterated 1D for smooth integrands, stratified Monte-Carlo for
// indicator-valued ones (standard-error estimate). All Monte-Carlo paths
// take an explicit seed so runs are reproducible.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace loschmidt {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

// Thrown when the evaluation budget is exhausted before the requested
// tolerance is met; carries the best estimate obtained so far.
class BudgetExceeded : public std::runtime_error {
  public:
    BudgetExceeded(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best) {}
    const QuadratureResult& best() const { return best_; }

  private:
    QuadratureResult best_;
};

struct Interval {
    double lo;
    double hi;  // either bound may be +-infinity
};

struct QuadratureOptions {
    double tol = 1e-8;
    std::size_t max_evaluations = 4'000'000;
    std::vector<double> breakpoints;  // interior panel boundaries, original variable
};

namespace detail {

// 15-point Kronrod abscissae (positive half) and weights; the embedded
// 7-point Gauss rule uses the odd-indexed abscissae.
inline constexpr std::array<double, 8> kKronrodX = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr std::array<double, 8> kKronrodW = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kGaussW = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
    double lo = 0.0, hi = 0.0;
    double integral = 0.0;
    double error = 0.0;
    double roundoff_floor = 0.0;  // below this the estimate cannot improve
};

// Integrates one panel; returns the Kronrod estimate with the usual
// QUADPACK error heuristic based on |K15-G7| and the mean deviation.
template <class F>
Panel gk15(F&& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double hlf = 0.5 * (hi - lo);

    std::array<double, 15> fv{};
    const double fc = f(mid);
    fv[14] = fc;
    double resk = kKronrodW[7] * fc;
    double resg = kGaussW[3] * fc;
    double resabs = kKronrodW[7] * std::fabs(fc);
    for (int i = 0; i < 7; ++i) {
        const double dx = hlf * kKronrodX[i];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        fv[2 * i] = f1;
        fv[2 * i + 1] = f2;
        resk += kKronrodW[i] * (f1 + f2);
        resabs += kKronrodW[i] * (std::fabs(f1) + std::fabs(f2));
        if (i % 2 == 1) resg += kGaussW[(i - 1) / 2] * (f1 + f2);
    }
    const double mean = 0.5 * resk;
    double resasc = kKronrodW[7] * std::fabs(fc - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kKronrodW[i] *
                  (std::fabs(fv[2 * i] - mean) + std::fabs(fv[2 * i + 1] - mean));

    Panel p;
    p.lo = lo;
    p.hi = hi;
    p.integral = resk * hlf;
    resabs *= std::fabs(hlf);
    resasc *= std::fabs(hlf);
    double err = std::fabs((resk - resg) * hlf);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    p.roundoff_floor = 50.0 * eps * resabs;
    p.error = std::max(err, p.roundoff_floor);
    return p;
}

template <class F>
QuadratureResult adapt(F&& f, std::vector<double> bounds, double tol,
                       std::size_t max_evals) {
    std::vector<Panel> panels;
    panels.reserve(64);
    std::size_t evals = 0;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        panels.push_back(gk15(f, bounds[i], bounds[i + 1]));
        evals += 15;
    }

    auto total = [&panels] {
        double v = 0.0, e = 0.0;
        for (const Panel& p : panels) {
            v += p.integral;
            e += p.error;
        }
        return std::pair{v, e};
    };

    for (;;) {
        auto [value, error] = total();
        if (error <= tol) return {value, error, evals};

        auto splittable = [](const Panel& p) {
            const double scale = std::fabs(p.lo) + std::fabs(p.hi) + 1.0;
            return p.error > 1.125 * p.roundoff_floor && p.error > 0.0 &&
                   p.hi - p.lo > 64.0 * std::numeric_limits<double>::epsilon() * scale;
        };
        Panel* worst = nullptr;
        for (Panel& p : panels)
            if (splittable(p) && (!worst || p.error > worst->error)) worst = &p;
        if (!worst) {
            // every panel is at its roundoff floor; report the honest estimate
            return {value, error, evals};
        }
        if (evals + 30 > max_evals)
            throw BudgetExceeded("integrate_1d: evaluation budget exceeded",
                                 {value, error, evals});
        const double mid = 0.5 * (worst->lo + worst->hi);
        Panel left = gk15(f, worst->lo, mid);
        Panel right = gk15(f, mid, worst->hi);
        evals += 30;
        *worst = left;
        panels.push_back(right);
    }
}

// inverse of x = t/(1-t^2) on (-1,1)
inline double rational_map_inverse(double x) {
    if (x == 0.0) return 0.0;
    return (std::sqrt(1.0 + 4.0 * x * x) - 1.0) / (2.0 * x);
}

}  // namespace detail

// Integrates f over an interval whose bounds may be infinite.
// Postcondition: |value - true integral| <= max(error_estimate, tol) for
// integrands smooth except for essential singularities that vanish with
// all derivatives (supply those points via options.breakpoints).
template <class F>
QuadratureResult integrate_1d(F&& f, Interval domain,
                              const QuadratureOptions& options = {}) {
    if (!(options.tol > 0.0)) throw std::invalid_argument("integrate_1d: tol must be > 0");
    if (domain.lo >= domain.hi)
        throw std::invalid_argument("integrate_1d: empty or inverted interval");

    const bool lo_inf = std::isinf(domain.lo);
    const bool hi_inf = std::isinf(domain.hi);

    std::vector<double> bps;
    for (double b : options.breakpoints)
        if (b > domain.lo && b < domain.hi) bps.push_back(b);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    // guard against 0 * inf when the jacobian blows up where f underflows
    auto weighted = [](double fx, double jac) {
        return fx == 0.0 ? 0.0 : fx * jac;
    };

    if (!lo_inf && !hi_inf) {
        std::vector<double> bounds{domain.lo};
        bounds.insert(bounds.end(), bps.begin(), bps.end());
        bounds.push_back(domain.hi);
        return detail::adapt(f, std::move(bounds), options.tol, options.max_evaluations);
    }

    if (lo_inf && hi_inf) {
        // x = t/(1-t^2), t in (-1,1)
        auto g = [&](double t) {
            const double den = 1.0 - t * t;
            const double x = t / den;
            const double jac = (1.0 + t * t) / (den * den);
            if (!std::isfinite(x) || !std::isfinite(jac)) return 0.0;
            return weighted(f(x), jac);
        };
        std::vector<double> bounds{-1.0};
        for (double b : bps) bounds.push_back(detail::rational_map_inverse(b));
        bounds.push_back(1.0);
        return detail::adapt(g, std::move(bounds), options.tol, options.max_evaluations);
    }

    // half-infinite: reduce (-inf, b] to [a, inf) by reflection
    const bool reflected = lo_inf;
    const double a = reflected ? -domain.hi : domain.lo;
    auto h = [&](double x) { return reflected ? f(-x) : f(x); };

    // x = a + t/(1-t), t in [0,1)
    auto g = [&](double t) {
        const double den = 1.0 - t;
        const double x = a + t / den;
        const double jac = 1.0 / (den * den);
        if (!std::isfinite(x) || !std::isfinite(jac)) return 0.0;
        return weighted(h(x), jac);
    };
    std::vector<double> bounds{0.0};
    for (double b : bps) {
        const double s = (reflected ? -b : b) - a;
        if (s > 0.0) bounds.push_back(s / (1.0 + s));
    }
    std::sort(bounds.begin(), bounds.end());
    bounds.push_back(1.0);
    return detail::adapt(g, std::move(bounds), options.tol, options.max_evaluations);
}

// ---------------------------------------------------------------------------
// 2D domains and integration

struct PlaneDomain {};
struct DiskDomain {
    double radius;
};
struct RectDomain {
    double x_lo, x_hi, y_lo, y_hi;
};
using Domain2D = std::variant<PlaneDomain, DiskDomain, RectDomain>;

inline Domain2D make_disk(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be > 0");
    return DiskDomain{radius};
}
inline Domain2D make_rect(double x_lo, double x_hi, double y_lo, double y_hi) {
    if (!(x_lo < x_hi) || !(y_lo < y_hi))
        throw std::invalid_argument("rectangle bounds must be ordered");
    return RectDomain{x_lo, x_hi, y_lo, y_hi};
}

enum class Method2D { quadrature, monte_carlo };

struct MonteCarloOptions {
    std::size_t samples = 1'000'000;
    unsigned strata_per_axis = 16;   // bounded domains only
    std::uint64_t seed = 0x5eed0001;
    double gaussian_scale = 1.0;     // importance-sampling sigma on the plane
};

struct Integrate2DOptions {
    double tol = 1e-8;                  // quadrature target
    std::size_t max_evaluations = 80'000'000;
    std::vector<double> x_breakpoints;  // outer-axis panel boundaries
    double inner_tol_factor = 0.02;
    MonteCarloOptions mc;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// small deterministic generator; identical streams across platforms
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        for (int i = 0; i < 4; ++i) (void)splitmix64(state_);
    }
    double uniform() {  // [0, 1)
        return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
    }
    // Box-Muller; returns one normal deviate per call, caching its pair
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stratified uniform sampling over a bounding box; each stratum owns a
// deterministic substream so the result is independent of evaluation order.
template <class F>
QuadratureResult mc_box(F&& f, double x_lo, double x_hi, double y_lo,
                        double y_hi, const MonteCarloOptions& mc) {
    const unsigned k = std::max(1u, mc.strata_per_axis);
    const std::size_t per =
        std::max<std::size_t>(2, mc.samples / (static_cast<std::size_t>(k) * k));
    const double wx = (x_hi - x_lo) / k;
    const double wy = (y_hi - y_lo) / k;
    const double cell_area = wx * wy;

    double value = 0.0, variance = 0.0;
    std::size_t used = 0;
    for (unsigned ix = 0; ix < k; ++ix) {
        for (unsigned iy = 0; iy < k; ++iy) {
            std::uint64_t s = mc.seed;
            s ^= 0x517cc1b727220a95ULL * (ix * k + iy + 1);
            Rng rng(s);
            const double cx = x_lo + ix * wx;
            const double cy = y_lo + iy * wy;
            double sum = 0.0, sumsq = 0.0;
            for (std::size_t i = 0; i < per; ++i) {
                const double x = cx + wx * rng.uniform();
                const double y = cy + wy * rng.uniform();
                const double v = f(x, y);
                sum += v;
                sumsq += v * v;
            }
            const double mean = sum / per;
            const double var =
                std::max(0.0, (sumsq - sum * mean) / (per - 1));
            value += cell_area * mean;
            variance += cell_area * cell_area * var / per;
            used += per;
        }
    }
    return {value, std::sqrt(variance), used};
}

// Gaussian importance sampling on the plane: requires f to decay at least
// as fast as exp(-(x^2+y^2)/(2 sigma^2)) for a finite-variance estimate.
template <class F>
QuadratureResult mc_plane(F&& f, const MonteCarloOptions& mc) {
    const double sigma = mc.gaussian_scale;
    const double norm = 1.0 / (6.283185307179586 * sigma * sigma);
    Rng rng(mc.seed);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < mc.samples; ++i) {
        const double x = sigma * rng.normal();
        const double y = sigma * rng.normal();
        const double fx = f(x, y);
        const double w =
            fx == 0.0 ? 0.0
                      : fx / (norm * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma)));
        sum += w;
        sumsq += w * w;
    }
    const double mean = sum / mc.samples;
    const double var = std::max(0.0, (sumsq - sum * mean) / (mc.samples - 1));
    return {mean, std::sqrt(var / mc.samples), mc.samples};
}

}  // namespace detail

// f(x, y); quadrature iterates adaptive 1D (outer x, inner y); monte_carlo
// reports a standard-error estimate and must be used for indicator-valued
// integrands.
template <class F>
QuadratureResult integrate_2d(F&& f, const Domain2D& domain, Method2D method,
                              const Integrate2DOptions& options = {}) {
    if (!(options.tol > 0.0)) throw std::invalid_argument("integrate_2d: tol must be > 0");

    if (method == Method2D::monte_carlo) {
        if (std::holds_alternative<PlaneDomain>(domain))
            return detail::mc_plane(f, options.mc);
        if (const auto* disk = std::get_if<DiskDomain>(&domain)) {
            const double r = disk->radius;
            const double r2 = r * r;
            auto masked = [&](double x, double y) {
                return x * x + y * y <= r2 ? f(x, y) : 0.0;
            };
            return detail::mc_box(masked, -r, r, -r, r, options.mc);
        }
        const auto& rect = std::get<RectDomain>(domain);
        return detail::mc_box(f, rect.x_lo, rect.x_hi, rect.y_lo, rect.y_hi,
                              options.mc);
    }

    // iterated adaptive quadrature; the worst inner error times the
    // effective outer width is folded into the final estimate
    const double inner_tol = options.tol * options.inner_tol_factor;
    std::size_t inner_evals = 0;
    double inner_error_max = 0.0;

    QuadratureOptions inner_opts;
    inner_opts.tol = inner_tol;
    inner_opts.max_evaluations = options.max_evaluations;

    auto outer_fn = [&](double x, Interval y_range) {
        auto res = integrate_1d([&](double y) { return f(x, y); }, y_range,
                                inner_opts);
        inner_evals += res.evaluations;
        if (inner_evals > options.max_evaluations)
            throw BudgetExceeded("integrate_2d: evaluation budget exceeded",
                                 {0.0, 0.0, inner_evals});
        return res;
    };

    QuadratureOptions outer_opts;
    outer_opts.tol = options.tol;
    outer_opts.max_evaluations = options.max_evaluations;
    outer_opts.breakpoints = options.x_breakpoints;

    QuadratureResult outer;
    if (std::holds_alternative<PlaneDomain>(domain)) {
        const Interval inf{-std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()};
        outer = integrate_1d(
            [&](double x) {
                auto r = outer_fn(x, inf);
                inner_error_max = std::max(inner_error_max, r.error_estimate);
                return r.value;
            },
            inf, outer_opts);
    } else if (const auto* disk = std::get_if<DiskDomain>(&domain)) {
        const double R = disk->radius;
        outer = integrate_1d(
            [&](double x) {
                const double w = std::sqrt(std::max(0.0, R * R - x * x));
                if (w == 0.0) return 0.0;
                auto r = outer_fn(x, {-w, w});
                inner_error_max = std::max(inner_error_max, r.error_estimate);
                return r.value;
            },
            {-R, R}, outer_opts);
    } else {
        const auto& rect = std::get<RectDomain>(domain);
        outer = integrate_1d(
            [&](double x) {
                auto r = outer_fn(x, {rect.y_lo, rect.y_hi});
                inner_error_max = std::max(inner_error_max, r.error_estimate);
                return r.value;
            },
            {rect.x_lo, rect.x_hi}, outer_opts);
    }

    double eff_width = 50.0;
    if (const auto* disk = std::get_if<DiskDomain>(&domain))
        eff_width = 2.0 * disk->radius;
    else if (const auto* rect = std::get_if<RectDomain>(&domain))
        eff_width = rect->x_hi - rect->x_lo;
    outer.error_estimate += inner_error_max * std::min(eff_width, 50.0);
    outer.evaluations += inner_evals;
    return outer;
}

}  // namespace loschmidt
