#pragma once

// Closed-form classical dynamics for H = p^2/2 + eps q^2/2 (+ g^2/q^2).
//
// A mode is the complex solution z(t) = (a+ib) cos t + (c+id) sin t
// (eps = +1) or the cosh/sinh analogue (eps = -1), with Wronskian of
// (z, conj z) fixed to 2i, i.e. ad - bc = 1. Its polar decomposition
// z = exp(u + i theta) drives both fidelity families through the rescaled
// phase theta_tilde(t) = theta(t) - theta(0). Since theta' = exp(-2u) > 0,
// theta is strictly increasing; it is unwound by walking from t = 0 in
// steps short enough that each increment stays below pi/2, which makes the
// winding exact rather than a principal-branch guess.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace loschmidt {

struct ModeSpec {
    double a, b, c, d;
    int epsilon;  // +1 stable / -1 unstable

    ModeSpec(double a_, double b_, double c_, double d_, int eps)
        : a(a_), b(b_), c(c_), d(d_), epsilon(eps) {
        if (eps != 1 && eps != -1)
            throw std::invalid_argument("ModeSpec: epsilon must be +1 or -1");
        if (std::fabs(a * d - b * c - 1.0) > 1e-12)
            throw std::invalid_argument(
                "ModeSpec: Wronskian normalization ad - bc = 1 violated");
    }

    static ModeSpec symmetric(int eps) { return ModeSpec(1.0, 0.0, 0.0, 1.0, eps); }
};

struct PhaseSample {
    double t;
    double u;            // log-modulus of z(t)
    double theta;        // continuous, unwound phase
    double theta_tilde;  // theta(t) - theta(0)
};

struct PhasePoint {
    double q;  // position
    double p;  // momentum
};

inline std::complex<double> mode_value(const ModeSpec& m, double t) {
    if (m.epsilon == 1)
        return {m.a * std::cos(t) + m.c * std::sin(t),
                m.b * std::cos(t) + m.d * std::sin(t)};
    return {m.a * std::cosh(t) + m.c * std::sinh(t),
            m.b * std::cosh(t) + m.d * std::sinh(t)};
}

inline std::complex<double> mode_derivative(const ModeSpec& m, double t) {
    if (m.epsilon == 1)
        return {-m.a * std::sin(t) + m.c * std::cos(t),
                -m.b * std::sin(t) + m.d * std::cos(t)};
    return {m.a * std::sinh(t) + m.c * std::cosh(t),
            m.b * std::sinh(t) + m.d * std::cosh(t)};
}

namespace detail {

// sup over t of theta'(t) = 1/|z|^2, from min |z|^2 in closed form;
// both cases reduce via ad - bc = 1.
inline double theta_rate_max(const ModeSpec& m) {
    const double A = 0.5 * (m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d);
    const double B = 0.5 * (m.a * m.a + m.b * m.b - m.c * m.c - m.d * m.d);
    if (m.epsilon == 1) {
        // |z|^2 = A + B cos 2t + C sin 2t, min = A - sqrt(A^2 - 1)
        return A + std::sqrt(std::max(0.0, A * A - 1.0));
    }
    // |z|^2 = A cosh 2t + C sinh 2t + B, min = B + sqrt(B^2 + 1)
    return std::sqrt(B * B + 1.0) - B;
}

inline double unwound_step(const std::complex<double>& z_prev,
                           const std::complex<double>& z_next) {
    const std::complex<double> ratio = std::conj(z_prev) * z_next;
    return std::atan2(ratio.imag(), ratio.real());
}

}  // namespace detail

// Polar decomposition sample at time t, theta unwound from theta(0) = arg(a + ib).
inline PhaseSample u_theta(const ModeSpec& m, double t) {
    const double theta0 = std::atan2(m.b, m.a);
    const double h = std::min(0.5, 0.9 / detail::theta_rate_max(m));
    const int n = std::max(1, static_cast<int>(std::ceil(std::fabs(t) / h)));
    double theta = theta0;
    std::complex<double> z_prev = mode_value(m, 0.0);
    for (int k = 1; k <= n; ++k) {
        const std::complex<double> z_next = mode_value(m, t * k / n);
        theta += detail::unwound_step(z_prev, z_next);
        z_prev = z_next;
    }
    const double u = std::log(std::abs(z_prev));
    return {t, u, theta, theta - theta0};
}

// Samples along an ascending time grid in one continuous walk (extra
// internal steps are inserted wherever grid spacing exceeds the safe step).
inline std::vector<PhaseSample> u_theta_grid(const ModeSpec& m,
                                             std::span<const double> times) {
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] < times[i - 1])
            throw std::invalid_argument("u_theta_grid: times must be ascending");

    const double theta0 = std::atan2(m.b, m.a);
    const double h = std::min(0.5, 0.9 / detail::theta_rate_max(m));
    std::vector<PhaseSample> out(times.size());

    auto walk = [&](double t_from, double theta_from, double t_to) {
        const double dt = t_to - t_from;
        const int n = std::max(1, static_cast<int>(std::ceil(std::fabs(dt) / h)));
        double theta = theta_from;
        std::complex<double> z_prev = mode_value(m, t_from);
        for (int k = 1; k <= n; ++k) {
            const std::complex<double> z_next = mode_value(m, t_from + dt * k / n);
            theta += detail::unwound_step(z_prev, z_next);
            z_prev = z_next;
        }
        return std::pair{theta, std::log(std::abs(z_prev))};
    };

    // indices of the first non-negative time
    std::size_t split = 0;
    while (split < times.size() && times[split] < 0.0) ++split;

    double t_cur = 0.0, theta_cur = theta0;
    for (std::size_t i = split; i < times.size(); ++i) {
        auto [theta, u] = walk(t_cur, theta_cur, times[i]);
        out[i] = {times[i], u, theta, theta - theta0};
        t_cur = times[i];
        theta_cur = theta;
    }
    t_cur = 0.0;
    theta_cur = theta0;
    for (std::size_t i = split; i-- > 0;) {
        auto [theta, u] = walk(t_cur, theta_cur, times[i]);
        out[i] = {times[i], u, theta, theta - theta0};
        t_cur = times[i];
        theta_cur = theta;
    }
    return out;
}

// Unperturbed flow of H_0: x(t) and xdot(t) from initial data (q, p).
inline PhasePoint unperturbed_trajectory(double q, double p, int epsilon, double t) {
    if (epsilon == 1)
        return {q * std::cos(t) + p * std::sin(t), -q * std::sin(t) + p * std::cos(t)};
    if (epsilon == -1)
        return {q * std::cosh(t) + p * std::sinh(t), q * std::sinh(t) + p * std::cosh(t)};
    throw std::invalid_argument("unperturbed_trajectory: epsilon must be +1 or -1");
}

// Perturbed flow of H_g: the nonnegative trajectory
//   y'(t) = sqrt(x(t)^2 + 2 g^2 s(t)^2 / q^2),   s = sin or sinh,
// with ydot' from the closed-form derivative (never finite differences;
// it feeds indicator integrands where noise would shift the boundary).
// Matches y'(0) = |q|, ydot'(0) = p sign(q).
inline PhasePoint perturbed_trajectory(double q, double p, double g, int epsilon,
                                       double t) {
    if (epsilon != 1 && epsilon != -1)
        throw std::invalid_argument("perturbed_trajectory: epsilon must be +1 or -1");
    if (q == 0.0) {
        if (g != 0.0)
            throw std::domain_error(
                "perturbed_trajectory: q = 0 starts on the singularity for g > 0");
    }
    const PhasePoint x = unperturbed_trajectory(q, p, epsilon, t);
    const double s = epsilon == 1 ? std::sin(t) : std::sinh(t);
    const double ds = epsilon == 1 ? std::cos(t) : std::cosh(t);
    const double k = q == 0.0 ? 0.0 : 2.0 * g * g / (q * q);
    const double y2 = x.q * x.q + k * s * s;
    const double y = std::sqrt(y2);
    double ydot;
    if (y > 0.0)
        ydot = (x.q * x.p + k * s * ds) / y;
    else
        ydot = std::fabs(x.p);  // g = 0 and x(t) = 0: one-sided derivative of |x|
    return {y, ydot};
}

// Conserved energy (1/2)(p^2 + eps q^2) + g^2/q^2 of H_g.
inline double energy_invariant(double q, double p, double g, int epsilon) {
    if (epsilon != 1 && epsilon != -1)
        throw std::invalid_argument("energy_invariant: epsilon must be +1 or -1");
    double term = 0.0;
    if (q == 0.0) {
        if (g != 0.0)
            throw std::domain_error("energy_invariant: q = 0 invalid for g > 0");
    } else {
        term = g * g / (q * q);
    }
    return 0.5 * (p * p + epsilon * q * q) + term;
}

}  // namespace loschmidt
