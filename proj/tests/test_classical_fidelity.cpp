#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "loschmidt/classical_fidelity.hpp"
#include "loschmidt/quadrature.hpp"

using namespace loschmidt;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSq2 = std::numbers::sqrt2;

MonteCarloOptions quick_mc(std::uint64_t seed, std::size_t n = 400'000) {
    MonteCarloOptions mc;
    mc.samples = n;
    mc.seed = seed;
    return mc;
}
}  // namespace

TEST_CASE("distributions are L2-normalized") {
    for (const PhaseSpaceDistribution dist :
         {PhaseSpaceDistribution{GaussianDist{1.0}},
          PhaseSpaceDistribution{GaussianDist{1.0 * kSq2}},
          PhaseSpaceDistribution{GaussianDist{2.0 * kSq2}}}) {
        auto r = integrate_2d(
            [&](double p, double q) {
                const double v = distribution_eval(dist, p, q);
                return v * v;
            },
            PlaneDomain{}, Method2D::quadrature);
        CHECK(r.value == Catch::Approx(1.0).margin(1e-10));
    }
    for (double radius : {1.0, std::sqrt(3.0)}) {
        const PhaseSpaceDistribution dist = BallDist{radius};
        auto r = integrate_2d(
            [&](double p, double q) {
                const double v = distribution_eval(dist, p, q);
                return v * v;
            },
            make_disk(radius), Method2D::monte_carlo, {.mc = quick_mc(5)});
        CHECK(std::fabs(r.value - 1.0) <= 3.0 * r.error_estimate + 1e-6);
    }
    CHECK_THROWS_AS(distribution_norm(GaussianDist{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(distribution_norm(BallDist{-1.0}), std::invalid_argument);
}

TEST_CASE("fidelity is one at t = 0 and for g = 0") {
    for (int eps : {1, -1}) {
        for (double g : {0.0, 0.7, 1.5}) {
            const auto r = classical_fidelity(eps, g, GaussianDist{1.0}, 0.0);
            CHECK(r.value == Catch::Approx(1.0).margin(1e-7));
        }
        ClassicalFidelityOptions opt;
        opt.mc = quick_mc(17);
        const auto rb = classical_fidelity(eps, 1.2, BallDist{1.0}, 0.0, opt);
        CHECK(std::fabs(rb.value - 1.0) <= 3.0 * rb.error_estimate + 1e-6);
        for (double t : {0.8, 2.0}) {
            const auto r = classical_fidelity(eps, 0.0, GaussianDist{1.0}, t);
            CHECK(r.value == Catch::Approx(1.0).margin(1e-7));
        }
    }
}

TEST_CASE("stable gaussian bounds and minimum at pi/2") {
    // frozen from an independent run: F_C(pi/2, 1) = 0.264263 (scipy dblquad)
    const auto mid = stable_gaussian_fidelity(1.0, 1.0, kPi / 2, 1e-9);
    CHECK(mid.value == Catch::Approx(0.264263).margin(5e-5));
    CHECK(mid.value >= std::exp(-2.0));

    for (double g : {0.1, 1.0 / kSq2, 1.0, 2.0}) {
        for (double t : {0.2, 0.9, kPi / 2}) {
            const double v = stable_gaussian_fidelity(g, 1.0, t, 1e-9).value;
            const double st = std::fabs(std::sin(t));
            CHECK(v >= std::exp(-2.0 * g) - 1e-8);
            CHECK(v <= std::min(1.0, kSq2 * std::exp(-g * st / std::sqrt(1.0 + st * st))) + 1e-8);
        }
    }

    // grid minimum sits at pi/2 for g = 1
    double best_t = 0.0, best_v = 2.0;
    for (int i = 0; i <= 60; ++i) {
        const double t = 0.2 + (kPi - 0.4) * i / 60.0;
        const double v = stable_gaussian_fidelity(1.0, 1.0, t, 1e-8).value;
        if (v < best_v) {
            best_v = v;
            best_t = t;
        }
    }
    CHECK(std::fabs(best_t - kPi / 2) < (kPi - 0.4) / 60.0 + 1e-12);
}

TEST_CASE("stable ball overlap vanishes at pi/2 for strong coupling") {
    for (double g : {1.0 / kSq2, 1.0}) {
        const auto r = stable_ball_fidelity(g, 1.0, kPi / 2, quick_mc(23));
        CHECK(r.value <= 3.0 * r.error_estimate + 1e-14);
    }
    // and stays above 1 - 2 g sqrt2 for weak coupling
    for (double t : {0.5, 1.2, kPi / 2}) {
        const auto r = stable_ball_fidelity(0.1, 1.0, t, quick_mc(29));
        CHECK(r.value >= 1.0 - 0.2 * kSq2 - 3.0 * r.error_estimate);
    }
}

TEST_CASE("reduced and direct routes agree") {
    for (auto [g, t] : {std::pair{1.0, 0.7}, {0.5, 2.0}}) {
        const auto reduced = stable_gaussian_fidelity(g, 1.0, t, 1e-9);
        const auto direct = direct_gaussian_fidelity(1, g, 1.0, t, 1e-9);
        CHECK(std::fabs(reduced.value - direct.value) < 1e-7);
    }
    for (auto [g, t] : {std::pair{0.8, 0.6}, {1.0, 0.4}}) {
        const auto reduced = unstable_gaussian_tau(g, 1.0, 1.0 / std::cosh(2 * t), 1.0, 1e-9);
        const auto direct = direct_gaussian_fidelity(-1, g, 1.0, t, 1e-9);
        CHECK(std::fabs(reduced.value - direct.value) < 1e-7);
    }
    // indicator case, small t
    const auto red_ball = unstable_ball_tau(1.0, std::sqrt(3.0), 1.0 / std::cosh(1.6), 1.0,
                                            quick_mc(31, 800'000));
    const auto dir_ball = direct_ball_fidelity(-1, 1.0, std::sqrt(3.0), 0.8,
                                               quick_mc(37, 800'000));
    CHECK(std::fabs(red_ball.value - dir_ball.value) <=
          3.0 * (red_ball.error_estimate + dir_ball.error_estimate));
}

TEST_CASE("rescaled distribution gives the g-independent fidelity") {
    for (auto [g, t] : {std::pair{1.0, 0.9}, {2.0, 0.5}}) {
        const auto rescaled = stable_gaussian_fidelity(g, g * kSq2, t, 1e-9);
        const auto canonical = stable_gaussian_fidelity(1.0 / kSq2, 1.0, t, 1e-9);
        CHECK(rescaled.value == Catch::Approx(canonical.value).margin(1e-7));
    }
}

TEST_CASE("unstable fidelities respect their uniform lower bounds") {
    for (double g : {0.1, 1.0 / kSq2, 1.0, 2.0}) {
        for (double t : {0.5, 2.0, 6.0}) {
            const double tau = 1.0 / std::cosh(2.0 * t);
            const auto gc = unstable_gaussian_tau(g, 1.0, tau, 1.0, 1e-8);
            CHECK(gc.value >= std::exp(-2.0 * g) - 1e-7);
            const auto gb = unstable_ball_tau(g, std::sqrt(3.0), tau, 1.0, quick_mc(41));
            CHECK(gb.value >= 1.0 - 2.0 * g * kSq2 / 3.0 - 3.0 * gb.error_estimate);
        }
    }
    // g-independent floors
    const auto gi = unstable_gaussian_tau(1.0 / kSq2, 1.0, 0.0, 1.0, 1e-8);
    CHECK(gi.value >= std::exp(-kSq2));
    const auto bi = unstable_ball_tau(1.0 / kSq2, std::sqrt(3.0), 0.0, 1.0, quick_mc(43));
    CHECK(bi.value >= 1.0 / 3.0 - 3.0 * bi.error_estimate);
}

TEST_CASE("asymptotic values match the two-decimal anchors") {
    ClassicalFidelityOptions opt;
    opt.tol = 1e-9;
    opt.mc = quick_mc(47, 2'000'000);
    const auto gauss = asymptotic_value(AsymptoticCase::gaussian, opt);
    CHECK(gauss.value == Catch::Approx(0.414).margin(0.01));
    // tighter frozen anchor from two independent runs: 0.41450
    CHECK(gauss.value == Catch::Approx(0.41450).margin(5e-4));

    const auto ball = asymptotic_value(AsymptoticCase::ball, opt);
    CHECK(ball.value == Catch::Approx(0.497).margin(0.01));
    const double area_bound = 2.0 * std::atan(std::sqrt(17.0)) / kPi -
                              std::sqrt(17.0) / (9.0 * kPi);
    CHECK(ball.value <= area_bound + 3.0 * ball.error_estimate);
}

TEST_CASE("approach to the asymptote is within 0.01 beyond t = 5") {
    const auto inf = unstable_gaussian_tau(1.0 / kSq2, 1.0, 0.0, 1.0, 1e-9);
    for (double t : {5.0, 8.0}) {
        const auto v = unstable_gaussian_tau(1.0 / kSq2, 1.0, 1.0 / std::cosh(2 * t), 1.0, 1e-9);
        CHECK(std::fabs(v.value - inf.value) < 0.01);
    }
}

TEST_CASE("cusp slopes grow as the window shrinks") {
    CuspOptions opt;
    opt.tol = 1e-10;
    const auto slopes = cusp_slopes(opt);
    REQUIRE(slopes.size() == 4);
    CHECK(slopes[0] > 0.0);
    for (std::size_t i = 1; i < slopes.size(); ++i) CHECK(slopes[i] > slopes[i - 1]);
    // frozen from the quadrature oracle: ~3.23, 5.16, 8.11, 12.67
    CHECK(slopes[0] == Catch::Approx(3.23).margin(0.1));
    CHECK(slopes[3] == Catch::Approx(12.67).margin(0.3));
}

TEST_CASE("fidelity curves carry error bars and stay in range") {
    std::vector<double> grid;
    for (int i = 0; i <= 16; ++i) grid.push_back(-2.0 + 4.0 * i / 16.0);
    ClassicalFidelityOptions opt;
    opt.mc = quick_mc(53, 100'000);
    const FidelityCurve curve =
        classical_fidelity_curve(-1, 1.0, BallDist{std::sqrt(3.0)}, grid, opt);
    REQUIRE(curve.samples.size() == grid.size());
    for (const auto& s : curve.samples) {
        CHECK(s.value >= 0.0);
        CHECK(s.value <= 1.0 + 3.0 * s.error + 1e-12);
    }
    // symmetric in t within noise
    const auto& front = curve.samples.front();
    const auto& back = curve.samples.back();
    CHECK(std::fabs(front.value - back.value) <= 3.0 * (front.error + back.error) + 1e-3);
    CHECK(curve.meta.family == "classical");
    CHECK(curve.meta.method == "monte-carlo");
}

TEST_CASE("stable gaussian curve is pi-periodic within tolerance") {
    const auto a = classical_fidelity(1, 1.0, GaussianDist{1.0}, 0.6);
    const auto b = classical_fidelity(1, 1.0, GaussianDist{1.0}, 0.6 + kPi);
    CHECK(std::fabs(a.value - b.value) < 1e-7);
}

TEST_CASE("bound reports aggregate margins") {
    std::vector<double> grid;
    for (int i = 0; i < 8; ++i) grid.push_back(kPi * i / 7.0);
    ClassicalFidelityOptions opt;
    opt.mc = quick_mc(59, 100'000);
    const BoundReport stable = bound_check_stable(1.0, grid, opt);
    CHECK(stable.all_hold());
    CHECK(!stable.entries.empty());

    std::vector<double> ugrid;
    for (int i = 0; i < 8; ++i) ugrid.push_back(-6.0 + 12.0 * i / 7.0);
    const BoundReport unstable = bound_check_unstable(1.0, ugrid, opt);
    CHECK(unstable.all_hold());

    // vacuous bounds auto-pass: g = 10 makes 1 - 2g sqrt2 negative
    const BoundReport vac = bound_check_stable(10.0, std::vector<double>{0.4}, opt);
    bool saw_vacuous = false;
    for (const auto& e : vac.entries)
        if (e.check == "stable.ball.lower" && e.vacuous) saw_vacuous = true;
    CHECK(saw_vacuous);
    CHECK(vac.all_hold());
}

TEST_CASE("indicator distributions refuse the quadrature method") {
    ClassicalFidelityOptions opt;
    opt.method = Method2D::quadrature;
    CHECK_THROWS_AS(classical_fidelity(1, 1.0, BallDist{1.0}, 0.5, opt),
                    std::invalid_argument);
}

TEST_CASE("monte-carlo fidelity is reproducible by seed") {
    ClassicalFidelityOptions opt;
    opt.mc = quick_mc(61, 50'000);
    const auto a = classical_fidelity(-1, 1.0, BallDist{std::sqrt(3.0)}, 1.0, opt);
    const auto b = classical_fidelity(-1, 1.0, BallDist{std::sqrt(3.0)}, 1.0, opt);
    CHECK(a.value == b.value);
    opt.mc.seed += 1;
    const auto c = classical_fidelity(-1, 1.0, BallDist{std::sqrt(3.0)}, 1.0, opt);
    CHECK(a.value != c.value);
}
