#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace loschmidt {

// log Gamma(x) for x > 0
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    return std::lgamma(x);
}

// Closed form of the Gaussian-with-inverse-square integral
//   int_R exp(-A x^2 - B / x^2) dx = sqrt(pi/A) exp(-2 sqrt(A B)),
// the analytic oracle behind every lower-bound evaluation here.
inline double gaussian_inverse_square(double A, double B) {
    if (!(A > 0.0)) throw std::domain_error("gaussian_inverse_square: requires A > 0");
    if (B < 0.0) throw std::domain_error("gaussian_inverse_square: requires B >= 0");
    return std::sqrt(3.14159265358979323846 / A) * std::exp(-2.0 * std::sqrt(A * B));
}

// Physicists' Hermite polynomial H_n(x), three-term recurrence.
inline double hermite_eval(unsigned n, double x) {
    if (n == 0) return 1.0;
    double hm = 1.0;        // H_0
    double h = 2.0 * x;     // H_1
    for (unsigned k = 1; k < n; ++k) {
        const double next = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = next;
    }
    return h;
}

// Normalized oscillator eigenfunction phi_n(x) = (sqrt(pi) n! 2^n)^{-1/2}
// e^{-x^2/2} H_n(x), evaluated by the stable normalized recurrence
// (values stay O(1) for any n, unlike H_n itself).
inline void hermite_function_all(unsigned n_max, double x, std::span<double> out) {
    if (out.size() < n_max + 1)
        throw std::invalid_argument("hermite_function_all: output span too small");
    const double pi_quarter = 0.75112554446494248286;  // pi^(-1/4)
    out[0] = pi_quarter * std::exp(-0.5 * x * x);
    if (n_max == 0) return;
    out[1] = std::sqrt(2.0) * x * out[0];
    for (unsigned n = 1; n < n_max; ++n)
        out[n + 1] = std::sqrt(2.0 / (n + 1.0)) * x * out[n] -
                     std::sqrt(n / (n + 1.0)) * out[n - 1];
}

inline double hermite_function(unsigned n, double x) {
    std::vector<double> buf(n + 1);
    hermite_function_all(n, x, buf);
    return buf[n];
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(unsigned n, std::vector<double>& nodes,
                           std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const unsigned m = (n + 1) / 2;
    for (unsigned i = 0; i < m; ++i) {
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (unsigned j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

}  // namespace detail

}  // namespace loschmidt
