#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "loschmidt/quadrature.hpp"
#include "loschmidt/special_functions.hpp"

using namespace loschmidt;

TEST_CASE("log_gamma at classical values") {
    CHECK(log_gamma(1.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(log_gamma(0.5) == Catch::Approx(std::log(std::sqrt(std::numbers::pi))).epsilon(1e-14));
    CHECK(log_gamma(5.0) == Catch::Approx(std::log(24.0)).epsilon(1e-14));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("log_gamma precision on [0.5, 50] against the recurrence") {
    // Gamma(x+1) = x Gamma(x) chains down to tabulated points
    for (double x = 0.5; x <= 49.0; x += 0.7) {
        const double lhs = log_gamma(x + 1.0);
        const double rhs = std::log(x) + log_gamma(x);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(lhs)));
    }
}

TEST_CASE("gaussian_inverse_square closed form") {
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    CHECK(gaussian_inverse_square(1.0, 0.0) == Catch::Approx(sqrt_pi).epsilon(1e-15));
    CHECK(gaussian_inverse_square(1.0, 1.0) ==
          Catch::Approx(sqrt_pi * std::exp(-2.0)).epsilon(1e-15));
    CHECK(gaussian_inverse_square(2.0, 3.0) ==
          Catch::Approx(std::sqrt(std::numbers::pi / 2.0) *
                        std::exp(-2.0 * std::sqrt(6.0))).epsilon(1e-15));
    CHECK_THROWS_AS(gaussian_inverse_square(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(gaussian_inverse_square(-2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(gaussian_inverse_square(1.0, -1.0), std::domain_error);

    // (A,B) = (2,3) against direct quadrature
    QuadratureOptions opts;
    opts.breakpoints = {-std::sqrt(3.0 / 36.0), 0.0, std::sqrt(3.0 / 36.0)};
    auto r = integrate_1d(
        [](double x) { return x == 0.0 ? 0.0 : std::exp(-2.0 * x * x - 3.0 / (x * x)); },
        {-std::numeric_limits<double>::infinity(),
         std::numeric_limits<double>::infinity()},
        opts);
    CHECK(std::fabs(r.value - gaussian_inverse_square(2.0, 3.0)) < 1e-8);
}

namespace {
// Rodrigues form H_n(x) = (-1)^n e^{x^2} d^n/dx^n e^{-x^2} by central
// finite differences; independent of the recurrence under test.
double hermite_rodrigues_fd(unsigned n, double x) {
    const double h = 1e-2;
    auto g = [](double t) { return std::exp(-t * t); };
    double dn = 0.0;
    switch (n) {
        case 0: dn = g(x); break;
        case 1: dn = (g(x + h) - g(x - h)) / (2.0 * h); break;
        case 2: dn = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h); break;
        case 3:
            dn = (g(x + 2 * h) - 2.0 * g(x + h) + 2.0 * g(x - h) - g(x - 2 * h)) /
                 (2.0 * h * h * h);
            break;
        default: REQUIRE(false);
    }
    return (n % 2 == 0 ? 1.0 : -1.0) * std::exp(x * x) * dn;
}
}  // namespace

TEST_CASE("hermite polynomials by recurrence") {
    CHECK(hermite_eval(0, 7.0) == 1.0);
    CHECK(hermite_eval(2, 1.0) == 2.0);    // 4x^2 - 2
    CHECK(hermite_eval(3, 1.0) == -4.0);   // 8x^3 - 12x
    CHECK(hermite_eval(1, -2.5) == -5.0);
    // H_5 = 32x^5 - 160x^3 + 120x
    const double x = 0.8;
    CHECK(hermite_eval(5, x) ==
          Catch::Approx(32 * std::pow(x, 5) - 160 * std::pow(x, 3) + 120 * x)
              .epsilon(1e-13));
    for (double xx : {-1.3, 0.4, 1.0}) {
        CHECK(hermite_eval(2, xx) == Catch::Approx(hermite_rodrigues_fd(2, xx)).margin(2e-3));
        CHECK(hermite_eval(3, xx) == Catch::Approx(hermite_rodrigues_fd(3, xx)).margin(2e-3));
    }
}

TEST_CASE("normalized hermite functions are orthonormal") {
    const Interval line{-std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
    for (unsigned n : {0u, 3u, 8u}) {
        auto norm = integrate_1d(
            [n](double x) {
                const double v = hermite_function(n, x);
                return v * v;
            },
            line, {.tol = 1e-11});
        CHECK(norm.value == Catch::Approx(1.0).epsilon(1e-9));
    }
    auto cross = integrate_1d(
        [](double x) { return hermite_function(2, x) * hermite_function(6, x); }, line,
        {.tol = 1e-11});
    CHECK(std::fabs(cross.value) < 1e-9);
}
