#pragma once

/**
 * @file spectrum_oracle.hpp
 * @brief Brute-force characteristic-root finder used to check the closed-form thresholds.
 *
 * Newton's method is seeded on a rectangular grid in the upper half plane,
 * converged roots are deduplicated, and the spectral abscissa (largest real
 * part) is bisected in tau to locate imaginary-axis crossings. The search box
 * is a heuristic bound, not a proof that no root lies further right.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "igp/error.hpp"
#include "igp/stability.hpp"

namespace igp::oracle {

struct RootEstimate {
    Complex lambda;
    double residual = 0.0;
    double tau = 0.0;
};

struct ScanSettings {
    int grid = 40;
    int max_iterations = 60;
    double step_tolerance = 1e-12;
    double dedup_radius = 1e-6;
    double residual_tolerance = 1e-10;
};

struct RootScan {
    std::vector<RootEstimate> roots;  // sorted by decreasing real part
    int seeds = 0;
    int converged = 0;
    std::string diagnostic;
};

[[nodiscard]] inline Complex eval_char(const QuasiPolynomial& qp, Complex l) {
    const Complex l2 = l * l;
    const Complex poly = l2 * l + qp.p[0] * l2 + qp.p[1] * l + qp.p[2];
    const Complex delayed = qp.q[0] * l2 + qp.q[1] * l + qp.q[2];
    return poly + delayed * std::exp(-l * qp.tau);
}

[[nodiscard]] inline Complex eval_char_derivative(const QuasiPolynomial& qp, Complex l) {
    const Complex dpoly = 3.0 * l * l + 2.0 * qp.p[0] * l + qp.p[1];
    const Complex delayed = qp.q[0] * l * l + qp.q[1] * l + qp.q[2];
    const Complex ddelayed = 2.0 * qp.q[0] * l + qp.q[1];
    return dpoly + (ddelayed - qp.tau * delayed) * std::exp(-l * qp.tau);
}

/// Seed-box half-width L and height Omega.
[[nodiscard]] inline std::pair<double, double> search_box(const QuasiPolynomial& qp) {
    double s = 1.0;
    for (double v : qp.p) s += std::abs(v);
    for (double v : qp.q) s += std::abs(v);
    return {s, 4.0 * s};
}

/// Newton from one seed; returns false when the iteration leaves the plane or stalls.
inline bool newton(const QuasiPolynomial& qp, Complex& l, const ScanSettings& cfg, double escape) {
    for (int it = 0; it < cfg.max_iterations; ++it) {
        const Complex d = eval_char_derivative(qp, l);
        if (d == Complex{0.0, 0.0}) return false;
        const Complex step = eval_char(qp, l) / d;
        l -= step;
        if (!std::isfinite(l.real()) || !std::isfinite(l.imag()) || std::abs(l) > escape) return false;
        if (std::abs(step) < cfg.step_tolerance * std::max(1.0, std::abs(l))) return true;
    }
    return false;
}

[[nodiscard]] inline RootScan scan_roots(const QuasiPolynomial& qp, const ScanSettings& cfg = {}) {
    if (!qp.finite()) throw Error(ErrorCode::invalid_input, "non-finite quasi-polynomial");
    const auto [L, W] = search_box(qp);
    const double escape = 100.0 * (L + W);
    RootScan scan;
    std::vector<RootEstimate> found;
    const int n = cfg.grid;
    for (int i = 0; i < n; ++i) {
        const double re = -L + 2.0 * L * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double im = W * j / (n - 1);
            Complex l{re, im};
            ++scan.seeds;
            if (!newton(qp, l, cfg, escape)) continue;
            if (l.imag() < 0.0) l = std::conj(l);
            const double res = std::abs(eval_char(qp, l));
            if (!(res < cfg.residual_tolerance)) continue;
            ++scan.converged;
            found.push_back({l, res, qp.tau});
        }
    }
    std::sort(found.begin(), found.end(), [](const RootEstimate& a, const RootEstimate& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
        return a.lambda.imag() > b.lambda.imag();
    });
    for (const auto& r : found) {
        const bool dup = std::any_of(scan.roots.begin(), scan.roots.end(), [&](const RootEstimate& k) {
            return std::abs(k.lambda - r.lambda) < cfg.dedup_radius;
        });
        if (!dup) scan.roots.push_back(r);
    }
    if (scan.roots.empty()) {
        scan.diagnostic = "no seed converged (" + std::to_string(scan.seeds) + " seeds)";
    }
    return scan;
}

/// The n roots (upper half plane) with the largest real parts; empty when nothing converged.
[[nodiscard]] inline std::vector<RootEstimate> rightmost_roots(const QuasiPolynomial& qp, std::size_t n,
                                                               const ScanSettings& cfg = {}) {
    if (n == 0) throw Error(ErrorCode::invalid_input, "rightmost_roots: n must be >= 1");
    RootScan scan = scan_roots(qp, cfg);
    if (scan.roots.size() > n) scan.roots.resize(n);
    return scan.roots;
}

[[nodiscard]] inline RootEstimate rightmost_root(const QuasiPolynomial& qp, const ScanSettings& cfg = {}) {
    RootScan scan = scan_roots(qp, cfg);
    if (scan.roots.empty()) throw Error(ErrorCode::no_crossing, scan.diagnostic);
    return scan.roots.front();
}

struct Crossing {
    double tau = 0.0;
    double omega = 0.0;
};

using QuasiPolynomialFamily = std::function<QuasiPolynomial(double)>;

[[nodiscard]] inline QuasiPolynomialFamily family_of(const QuasiPolynomial& qp) {
    return [qp](double t) { return qp.with_tau(t); };
}

/// Bisects the spectral abscissa between delays where it has opposite signs.
[[nodiscard]] inline Crossing find_crossing(const QuasiPolynomialFamily& family, double tau_lo, double tau_hi,
                                            const ScanSettings& cfg = {}) {
    if (!(tau_lo < tau_hi) || tau_lo < 0.0) throw Error(ErrorCode::invalid_input, "find_crossing: bad bracket");
    const double f_lo = rightmost_root(family(tau_lo), cfg).lambda.real();
    const double f_hi = rightmost_root(family(tau_hi), cfg).lambda.real();
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
        throw Error(ErrorCode::no_crossing, "spectral abscissa has the same sign at both ends");
    }
    const bool rising = f_lo < 0.0;
    double lo = tau_lo;
    double hi = tau_hi;
    while (hi - lo >= 1e-8) {
        const double mid = 0.5 * (lo + hi);
        const bool negative = rightmost_root(family(mid), cfg).lambda.real() < 0.0;
        if (negative == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double t = 0.5 * (lo + hi);
    return {t, std::abs(rightmost_root(family(t), cfg).lambda.imag())};
}

[[nodiscard]] inline Crossing find_crossing(const QuasiPolynomial& qp, double tau_lo, double tau_hi,
                                            const ScanSettings& cfg = {}) {
    return find_crossing(family_of(qp), tau_lo, tau_hi, cfg);
}

/// Coarse scan of [tau_lo, tau_hi] for the first sign change of the spectral abscissa, then bisection.
[[nodiscard]] inline Crossing first_crossing(const QuasiPolynomialFamily& family, double tau_lo, double tau_hi,
                                             int steps, const ScanSettings& cfg = {}) {
    if (steps < 1) throw Error(ErrorCode::invalid_input, "first_crossing: steps must be >= 1");
    double prev_t = tau_lo;
    const bool start_negative = rightmost_root(family(tau_lo), cfg).lambda.real() < 0.0;
    for (int i = 1; i <= steps; ++i) {
        const double t = tau_lo + (tau_hi - tau_lo) * i / steps;
        const bool negative = rightmost_root(family(t), cfg).lambda.real() < 0.0;
        if (negative != start_negative) return find_crossing(family, prev_t, t, cfg);
        prev_t = t;
    }
    throw Error(ErrorCode::no_crossing, "no sign change of the spectral abscissa on the scanned interval");
}

}  // namespace igp::oracle
