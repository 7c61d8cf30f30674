#pragma once

// Quantum fidelity (return-probability) engine.
//
// The reference state is the ground state of H_g^+ = p^2/2 + q^2/2 + g^2/q^2,
//   psi_0(x) = c_g x^alpha exp(-x^2/2),  alpha = 1/2 + sqrt(1/4 + 2 g^2),
// and the fidelity modulus reduces to |sum_n w_n exp(i n theta_tilde)| where
// w_n = |<psi_0, phi_n>|^2 are spectral weights against the oscillator
// eigenstates phi_n. For integer alpha the expansion is an exact finite
// Hermite-algebra family carried on a single parity class; otherwise psi_0
// is normalized on the half line and expanded against the half-line
// restricted phi_n (the weights then decay only algebraically in n, so the
// stored weights are normalized to unit mass and the raw truncation tail is
// reported separately).

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "loschmidt/curve.hpp"
#include "loschmidt/dynamics.hpp"
#include "loschmidt/special_functions.hpp"

namespace loschmidt {

struct CouplingAlpha {
    double g;
    double alpha;
};

// alpha = 1/2 + sqrt(1/4 + 2 g^2); the fidelity depends on g^2 only, so a
// negative g is folded to |g|.
inline CouplingAlpha alpha_from_g(double g) {
    const double ag = std::fabs(g);
    return {ag, 0.5 + std::sqrt(0.25 + 2.0 * ag * ag)};
}

struct GroundState {
    double g;
    double alpha;
    double normalization;  // c_g
    bool integer_alpha;    // full-line normalization (polynomial extension)
};

inline GroundState ground_state(double g) {
    const CouplingAlpha ca = alpha_from_g(g);
    const bool integer = std::fabs(ca.alpha - std::round(ca.alpha)) < 1e-9;
    // full line: int x^(2a) e^(-x^2) = Gamma(a + 1/2); half line: half of it
    const double log_norm2 =
        integer ? -log_gamma(ca.alpha + 0.5) : std::log(2.0) - log_gamma(ca.alpha + 0.5);
    return {ca.g, ca.alpha, std::exp(0.5 * log_norm2), integer};
}

inline double ground_state_eval(const GroundState& gs, double x) {
    if (x == 0.0) return 0.0;
    if (!gs.integer_alpha && x < 0.0) return 0.0;
    const double mag = gs.normalization * std::pow(std::fabs(x), gs.alpha) *
                       std::exp(-0.5 * x * x);
    const bool odd = gs.integer_alpha && (static_cast<long>(std::llround(gs.alpha)) % 2 != 0);
    return odd && x < 0.0 ? -mag : mag;
}

struct SpectralEntry {
    int n;
    double weight;
};

class SpectralWeights {
  public:
    SpectralWeights(std::vector<SpectralEntry> entries, double tail_mass, bool exact)
        : entries_(std::move(entries)), tail_mass_(tail_mass), exact_(exact) {
        double sum = 0.0;
        for (const auto& e : entries_) {
            if (e.weight < 0.0 || e.n < 0)
                throw std::invalid_argument("SpectralWeights: negative entry");
            sum += e.weight;
        }
        if (!(sum > 0.0)) throw std::invalid_argument("SpectralWeights: zero mass");
        for (auto& e : entries_) e.weight /= sum;
    }

    const std::vector<SpectralEntry>& entries() const { return entries_; }
    double tail_mass() const { return tail_mass_; }  // raw mass beyond n_max
    bool exact() const { return exact_; }

    bool single_parity() const {
        for (const auto& e : entries_)
            if ((e.n & 1) != (entries_.front().n & 1)) return false;
        return true;
    }

  private:
    std::vector<SpectralEntry> entries_;
    double tail_mass_;
    bool exact_;
};

class TruncationError : public std::runtime_error {
  public:
    TruncationError(const std::string& what, SpectralWeights partial, double tail)
        : std::runtime_error(what), partial_(std::move(partial)), tail_(tail) {}
    const SpectralWeights& partial() const { return partial_; }
    double tail_mass() const { return tail_; }

  private:
    SpectralWeights partial_;
    double tail_;
};

// Exact finite expansion for integer alpha = m:
//   x^m = (m!/2^m) sum_j H_{m-2j}(x) / (j! (m-2j)!),
// whence w_k = c_g^2 d_k^2 sqrt(pi) 2^k k! on k = m, m-2, ..., evaluated in
// log space. Throws unless alpha is integral.
inline SpectralWeights spectral_weights_exact(double g) {
    const CouplingAlpha ca = alpha_from_g(g);
    const double am = std::round(ca.alpha);
    if (std::fabs(ca.alpha - am) > 1e-9)
        throw std::invalid_argument("spectral_weights_exact: alpha not integral");
    const int m = static_cast<int>(am);
    const double ln2 = std::log(2.0);
    const double lnpi = std::log(std::numbers::pi);
    std::vector<SpectralEntry> entries;
    for (int k = m % 2; k <= m; k += 2) {
        const double log_d = log_gamma(m + 1.0) - m * ln2 -
                             log_gamma((m - k) / 2 + 1.0) - log_gamma(k + 1.0);
        const double log_w = 2.0 * log_d + 0.5 * lnpi + k * ln2 +
                             log_gamma(k + 1.0) - log_gamma(am + 0.5);
        entries.push_back({k, std::exp(log_w)});
    }
    return SpectralWeights(std::move(entries), 0.0, true);
}

// Quadrature route: lambda_n = <phi_n, psi_0> on composite Gauss-Legendre
// panels over [0, sqrt(2 n_max + 1) + 8], all n accumulated in one sweep of
// the stable phi recurrence. For integer alpha the full-line value is twice
// the half-line one on the matching parity and zero otherwise.
inline SpectralWeights spectral_weights_quadrature(double g, int n_max = 200,
                                                   double tol = 1e-10) {
    if (n_max < 0) throw std::invalid_argument("spectral_weights: n_max must be >= 0");
    const GroundState gs = ground_state(g);

    const double x_max = std::sqrt(2.0 * n_max + 1.0) + 8.0;
    const int panels = static_cast<int>(std::ceil(x_max));
    static const auto gl = [] {
        std::vector<double> n, w;
        detail::gauss_legendre(32, n, w);
        return std::pair{n, w};
    }();

    std::vector<double> lambda(n_max + 1, 0.0);
    std::vector<double> phi(n_max + 1);
    for (int pnl = 0; pnl < panels; ++pnl) {
        const double lo = x_max * pnl / panels;
        const double hi = x_max * (pnl + 1) / panels;
        for (std::size_t i = 0; i < gl.first.size(); ++i) {
            const double x = 0.5 * (hi - lo) * gl.first[i] + 0.5 * (hi + lo);
            const double w = 0.5 * (hi - lo) * gl.second[i];
            const double psi = gs.normalization * std::pow(x, gs.alpha) *
                               std::exp(-0.5 * x * x);
            if (psi == 0.0) continue;
            hermite_function_all(static_cast<unsigned>(n_max), x, phi);
            const double wp = w * psi;
            for (int n = 0; n <= n_max; ++n) lambda[n] += wp * phi[n];
        }
    }

    const int parity = static_cast<int>(std::llround(gs.alpha)) % 2;
    std::vector<SpectralEntry> entries;
    double raw_sum = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        double ln = lambda[n];
        if (gs.integer_alpha) ln = (n % 2 == parity) ? 2.0 * ln : 0.0;
        const double w = ln * ln;
        raw_sum += w;
        if (w > 1e-15) entries.push_back({n, w});
    }
    const double tail = std::max(0.0, 1.0 - raw_sum);
    SpectralWeights result(std::move(entries), tail, false);
    if (tail > tol)
        throw TruncationError("spectral_weights: tail mass " + std::to_string(tail) +
                                  " above tolerance at n_max",
                              result, tail);
    return result;
}

inline SpectralWeights spectral_weights(double g, int n_max = 200, double tol = 1e-10) {
    const CouplingAlpha ca = alpha_from_g(g);
    if (std::fabs(ca.alpha - std::round(ca.alpha)) < 1e-9) return spectral_weights_exact(g);
    return spectral_weights_quadrature(g, n_max, tol);
}

// |sum_n w_n exp(i n theta_tilde)|; the alpha-dependent prefactor of the
// fidelity drops out of the modulus.
inline double fidelity_modulus(const SpectralWeights& weights, double theta_tilde) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& e : weights.entries())
        acc += e.weight * std::polar(1.0, e.n * theta_tilde);
    return std::abs(acc);
}

// F_Q(t, g) (eps = +1) or G_Q(t, g) (eps = -1) sampled on an ascending grid.
inline FidelityCurve quantum_fidelity_curve(const ModeSpec& mode,
                                            const SpectralWeights& weights,
                                            std::span<const double> grid,
                                            double g_label = 0.0) {
    const auto phases = u_theta_grid(mode, grid);
    FidelityCurve curve;
    curve.meta.family = "quantum";
    curve.meta.epsilon = mode.epsilon;
    curve.meta.g = g_label;
    curve.meta.distribution = "none";
    curve.meta.method = "exact";
    curve.meta.mode = {mode.a, mode.b, mode.c, mode.d};
    curve.samples.reserve(grid.size());
    for (const PhaseSample& ps : phases)
        curve.samples.push_back({ps.t, fidelity_modulus(weights, ps.theta_tilde), 0.0});
    return curve;
}

inline FidelityCurve quantum_fidelity_curve(const ModeSpec& mode, double g,
                                            std::span<const double> grid) {
    return quantum_fidelity_curve(mode, spectral_weights(g), grid, std::fabs(g));
}

// First time in (0, pi] with theta_tilde = pi/2: the fidelity minimum for
// the finite single-parity weight families. theta_tilde is strictly
// increasing with theta_tilde(pi) = pi, so bisection always brackets.
inline double minimum_time(const ModeSpec& mode) {
    if (mode.epsilon != 1)
        throw std::invalid_argument("minimum_time: defined for the stable case only");
    const double target = 0.5 * std::numbers::pi;
    double lo = 0.0, hi = std::numbers::pi;
    for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (u_theta(mode, mid).theta_tilde < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace loschmidt
