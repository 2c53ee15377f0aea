#pragma once

/**
 * @file critical_delay.hpp
 * @brief Closed-form Hopf thresholds in the delay for E1..E4.
 *
 * Each report carries the smallest delay at which a root pair reaches the
 * imaginary axis, the crossing frequency, the sequence of later crossings on
 * the same frequency, and the sign of d(Re lambda)/d tau there.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "igp/error.hpp"
#include "igp/model.hpp"
#include "igp/stability.hpp"

namespace igp {

enum class HopfStatus { crossing, absolutely_stable, not_applicable };

inline const char* to_string(HopfStatus s) {
    switch (s) {
        case HopfStatus::crossing: return "crossing";
        case HopfStatus::absolutely_stable: return "absolutely-stable";
        case HopfStatus::not_applicable: return "not-applicable";
    }
    return "?";
}

/// One frequency at which a root can sit on the imaginary axis, and the delays where it does.
struct CrossingBranch {
    double omega = 0.0;
    std::vector<double> tau_sequence;
    int direction = 0;
};

struct HopfReport {
    EquilibriumKind kind = EquilibriumKind::E1;
    HopfStatus status = HopfStatus::not_applicable;
    std::optional<double> tau_critical;
    double omega = 0.0;
    /// Delays at which +-i omega is a root, increasing, spacing 2 pi / omega.
    std::vector<double> tau_sequence;
    /// E1..E3 only: zeros of the cosine equation, (2k+1) pi / (2 omega). Every other one is a crossing.
    std::vector<double> candidate_sequence;
    int transversality_sign = 0;
    std::vector<Criterion> hypotheses;
    std::vector<CrossingBranch> branches;
    std::vector<std::pair<std::string, double>> details;
    std::vector<std::string> notes;
    std::string reason;

    [[nodiscard]] bool applicable() const { return status != HopfStatus::not_applicable; }

    /// Upper end of the delay interval (0, t) on which the equilibrium is stable.
    [[nodiscard]] double stable_until() const {
        return tau_critical ? *tau_critical : std::numeric_limits<double>::infinity();
    }

    [[nodiscard]] std::optional<double> detail(std::string_view name) const {
        for (const auto& [n, v] : details)
            if (n == name) return v;
        return std::nullopt;
    }
};

struct HopfOptions {
    int k_max = 5;
    /// For E4 with S>0 and b>=0: run the crossing analysis anyway when the
    /// delay-free Routh-Hurwitz test passes.
    bool extend_e4 = false;
};

// Cubic roots -----------------------------------------------------------------

struct CubicRoots {
    std::vector<double> roots;  // real roots, ascending
    bool repeated = false;
};

[[nodiscard]] inline double cubic_value(double al, double be, double ga, double u) {
    return ((u + al) * u + be) * u + ga;
}

[[nodiscard]] inline double cubic_slope(double al, double be, double u) { return (3.0 * u + 2.0 * al) * u + be; }

/// Real roots of u^3 + al u^2 + be u + ga by the trigonometric / Cardano forms,
/// each polished with one Newton step.
[[nodiscard]] inline CubicRoots real_cubic_roots(double al, double be, double ga) {
    const double shift = al / 3.0;
    const double p = be - al * al / 3.0;
    const double q = 2.0 * al * al * al / 27.0 - al * be / 3.0 + ga;
    const double half_q = q / 2.0;
    const double third_p = p / 3.0;
    const double disc = half_q * half_q + third_p * third_p * third_p;
    const double scale = half_q * half_q + std::abs(third_p * third_p * third_p);
    const double eps = 1e-12 * scale;

    CubicRoots out;
    std::vector<double> t;
    if (scale == 0.0) {
        t = {0.0, 0.0, 0.0};
        out.repeated = true;
    } else if (disc > eps) {
        const double s = std::sqrt(disc);
        t = {std::cbrt(-half_q + s) + std::cbrt(-half_q - s)};
    } else if (disc < -eps) {
        const double m = 2.0 * std::sqrt(-third_p);
        // cos(3 phi) = (3q / 2p) sqrt(-3/p)
        const double c3 = std::clamp(1.5 * q / p * std::sqrt(-3.0 / p), -1.0, 1.0);
        const double phi = std::acos(c3) / 3.0;
        for (int k = 0; k < 3; ++k) t.push_back(m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
    } else {
        // double root
        const double simple = 3.0 * q / p;
        const double dbl = -1.5 * q / p;
        t = {simple, dbl, dbl};
        out.repeated = true;
    }
    for (double ti : t) {
        double u = ti - shift;
        const double d = cubic_slope(al, be, u);
        if (d != 0.0 && !out.repeated) u -= cubic_value(al, be, ga, u) / d;
        out.roots.push_back(u);
    }
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

// Crossing direction ------------------------------------------------------------

namespace detail {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

struct DirectionVisitor {
    const QuasiPolynomial& qp;
    double omega;

    int operator()(const ScalarDelayFactor& f) const { return sign_of(2.0 * omega * omega - f.gain * f.gain); }
    int operator()(const QuadraticDelayFactor& f) const {
        return sign_of(2.0 * omega * omega - f.b * f.b - 2.0 * f.c);
    }
    int operator()(const SparseCubicForm& f) const {
        const double al = -2.0 * f.a - f.c * f.c;
        const double be = f.a * f.a + 2.0 * f.c * f.d;
        const double w2 = omega * omega;
        return sign_of(3.0 * w2 * w2 + 2.0 * al * w2 + be);
    }
    int operator()(std::monostate) const {
        // implicit differentiation: d lambda / d tau = lambda q(lambda) e^{-lambda tau} / chi'(lambda)
        const Complex l{0.0, omega};
        const Complex dl = l * qp.q_at(l) * std::exp(-l * qp.tau) / qp.derivative(l);
        return sign_of(dl.real());
    }
};

}  // namespace detail

/// Sign of d(Re lambda)/d tau where lambda = i omega is a root at the given delay.
[[nodiscard]] inline int crossing_direction(const QuasiPolynomial& qp, double omega, double tau) {
    const QuasiPolynomial at = qp.with_tau(tau);
    const double res = std::abs(at.value(Complex{0.0, omega}));
    if (!std::isfinite(res) || res >= 1e-8) {
        throw Error(ErrorCode::invalid_crossing,
                    "i*omega is not a root at this delay (residual " + std::to_string(res) + ")");
    }
    return std::visit(detail::DirectionVisitor{at, omega}, at.shape);
}

// Reports -----------------------------------------------------------------------

namespace detail {

inline HopfReport not_applicable(EquilibriumKind kind, std::vector<Criterion> hyp, std::string reason) {
    HopfReport r;
    r.kind = kind;
    r.status = HopfStatus::not_applicable;
    r.hypotheses = std::move(hyp);
    r.reason = std::move(reason);
    return r;
}

inline std::string failing(const std::vector<Criterion>& hyp) {
    std::string s;
    for (const auto& c : hyp) {
        if (!c.holds) s += (s.empty() ? "" : ", ") + c.name + " fails";
    }
    return s;
}

inline bool all_hold(const std::vector<Criterion>& hyp) {
    return std::all_of(hyp.begin(), hyp.end(), [](const Criterion& c) { return c.holds; });
}

/// Crossings of lambda^2 + b lambda e^{-lambda tau} + c (c >= 0, b > 0).
inline void fill_quadratic(HopfReport& r, double b, double c, int k_max) {
    const double pi = std::numbers::pi;
    const double sum = b * b + 2.0 * c;
    const double disc = sum * sum - 4.0 * c * c;
    const double mu_plus2 = 0.5 * (sum + std::sqrt(disc));
    const double mu_plus = std::sqrt(mu_plus2);
    r.details = {{"b", b}, {"c", c}, {"discriminant", disc}, {"mu_plus", mu_plus}};

    // sin(mu tau) = (mu^2 - c) / (b mu) is +1 on mu_plus and -1 on mu_minus.
    CrossingBranch plus{mu_plus, {}, sign_of(2.0 * mu_plus2 - b * b - 2.0 * c)};
    for (int k = 0; k < k_max; ++k) plus.tau_sequence.push_back((0.5 * pi + 2.0 * pi * k) / mu_plus);
    r.branches.push_back(plus);
    if (c > 0.0) {
        const double mu_minus2 = c * c / mu_plus2;
        const double mu_minus = std::sqrt(mu_minus2);
        r.details.emplace_back("mu_minus", mu_minus);
        CrossingBranch minus{mu_minus, {}, sign_of(2.0 * mu_minus2 - b * b - 2.0 * c)};
        for (int k = 0; k < k_max; ++k) minus.tau_sequence.push_back((1.5 * pi + 2.0 * pi * k) / mu_minus);
        r.branches.push_back(minus);
    }

    r.status = HopfStatus::crossing;
    r.omega = mu_plus;
    r.tau_critical = pi / (2.0 * mu_plus);
    r.tau_sequence = plus.tau_sequence;
    for (int k = 0; k < k_max; ++k) r.candidate_sequence.push_back((2.0 * k + 1.0) * pi / (2.0 * mu_plus));
    r.transversality_sign = plus.direction;
}

}  // namespace detail

[[nodiscard]] inline HopfReport hopf_E1(const ModelParams& p, const HopfOptions& opt = {}) {
    p.validate();
    const Constants k = constants(p);
    std::vector<Criterion> hyp{{"A>K", k.A - k.K, k.A > k.K}, {"C>K", k.C - k.K, k.C > k.K}};
    if (!detail::all_hold(hyp)) {
        return detail::not_applicable(EquilibriumKind::E1, hyp, detail::failing(hyp));
    }
    HopfReport r;
    r.kind = EquilibriumKind::E1;
    r.hypotheses = std::move(hyp);
    // lambda + a0 e^{-lambda tau} is the quadratic form with b = a0, c = 0 after factoring out lambda.
    detail::fill_quadratic(r, p.a0, 0.0, opt.k_max);
    r.details = {{"a0", p.a0}};
    return r;
}

[[nodiscard]] inline HopfReport hopf_E2(const ModelParams& p, const HopfOptions& opt = {}) {
    p.validate();
    const Constants k = constants(p);
    std::vector<Criterion> hyp{{"B>0", k.B, k.B > 0.0}, {"R<0", k.R, k.R < 0.0}};
    if (!detail::all_hold(hyp)) {
        std::string why = detail::failing(hyp);
        if (k.B > 0.0) why += " (E2 unstable at tau=0, no switch to detect)";
        return detail::not_applicable(EquilibriumKind::E2, hyp, why);
    }
    HopfReport r;
    r.kind = EquilibriumKind::E2;
    r.hypotheses = std::move(hyp);
    const QuadraticDelayFactor f = e2_factor(p);
    detail::fill_quadratic(r, f.b, f.c, opt.k_max);
    return r;
}

[[nodiscard]] inline HopfReport hopf_E3(const ModelParams& p, const HopfOptions& opt = {}) {
    p.validate();
    const Constants k = constants(p);
    std::vector<Criterion> hyp{{"D>0", k.D, k.D > 0.0}, {"Q<0", k.Q, k.Q < 0.0}};
    if (!detail::all_hold(hyp)) {
        std::string why = detail::failing(hyp);
        if (k.D > 0.0) why += " (E3 unstable at tau=0, no switch to detect)";
        return detail::not_applicable(EquilibriumKind::E3, hyp, why);
    }
    HopfReport r;
    r.kind = EquilibriumKind::E3;
    r.hypotheses = std::move(hyp);
    const QuadraticDelayFactor f = e3_factor(p);
    detail::fill_quadratic(r, f.b, f.c, opt.k_max);
    return r;
}

/// Delay at which +-i omega first solves the E4 equation: both
/// (c w^2 - d) cos(w tau) = b and (c w^2 - d) sin(w tau) = w^3 - a w must hold.
[[nodiscard]] inline std::optional<double> e4_first_delay(const SparseCubicForm& f, double omega) {
    const double den = f.c * omega * omega - f.d;
    if (den == 0.0) return std::nullopt;
    const double cos_target = std::clamp(f.b / den, -1.0, 1.0);
    const double sin_target = (omega * omega * omega - f.a * omega) / den;
    double theta = std::acos(cos_target);
    const double alt = 2.0 * std::numbers::pi - theta;
    if (std::abs(std::sin(theta) - sin_target) > std::abs(std::sin(alt) - sin_target)) theta = alt;
    if (theta <= 0.0) theta += 2.0 * std::numbers::pi;
    return theta / omega;
}

[[nodiscard]] inline HopfReport hopf_E4(const ModelParams& p, const HopfOptions& opt = {}) {
    p.validate();
    const Constants k = constants(p);
    const auto eq = equilibrium(p, EquilibriumKind::E4);
    if (!eq.defined) {
        return detail::not_applicable(EquilibriumKind::E4, {{"S!=0", 0.0, false}}, "E4 undefined (S = 0)");
    }
    const SparseCubicForm f = positive_equilibrium_coefficients(p);
    std::vector<Criterion> hyp{
        {"E4 exists", std::min({eq.coords.x, eq.coords.y, eq.coords.z}), eq.exists},
        {"S>0", k.S, k.S > 0.0},
        {"b<0", f.b, f.b < 0.0},
    };
    bool extended = false;
    if (!hyp[0].holds || !hyp[1].holds) {
        return detail::not_applicable(EquilibriumKind::E4, hyp, detail::failing(hyp));
    }
    if (!hyp[2].holds) {
        const Tau0Verdict v0 = tau0_stability(p, eq);
        if (!opt.extend_e4 || !v0.stable_at_tau0) {
            std::string why = detail::failing(hyp);
            if (!v0.stable_at_tau0) why += " (E4 unstable at tau=0)";
            return detail::not_applicable(EquilibriumKind::E4, hyp, why);
        }
        extended = true;
    }

    HopfReport r;
    r.kind = EquilibriumKind::E4;
    r.hypotheses = hyp;
    if (extended) r.notes.emplace_back("outside the S>0, b<0 regime: computed by the same machinery");

    const double al = -2.0 * f.a - f.c * f.c;
    const double be = f.a * f.a + 2.0 * f.c * f.d;
    const double ga = f.b * f.b - f.d * f.d;
    r.details = {{"a", f.a}, {"b", f.b}, {"c", f.c}, {"d", f.d}, {"alpha", al}, {"beta", be}, {"gamma", ga}};

    const CubicRoots cr = real_cubic_roots(al, be, ga);
    struct Candidate {
        double u, omega, tau0;
    };
    std::vector<Candidate> cands;
    for (double u : cr.roots) {
        if (!(u > 0.0)) continue;
        const double w = std::sqrt(u);
        const auto t0 = e4_first_delay(f, w);
        if (!t0) continue;
        cands.push_back({u, w, *t0});
        CrossingBranch br{w, {}, detail::sign_of(cubic_slope(al, be, u))};
        for (int kk = 0; kk < opt.k_max; ++kk) br.tau_sequence.push_back(*t0 + 2.0 * std::numbers::pi * kk / w);
        r.branches.push_back(std::move(br));
    }

    if (cands.empty()) {
        if (!extended) {
            throw Error(ErrorCode::internal, "h(u) has no positive root although gamma < 0");
        }
        r.status = HopfStatus::absolutely_stable;
        r.notes.emplace_back("no positive root of h: no imaginary-axis crossing");
        return r;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < cands.size(); ++i) {
        const double dt = cands[i].tau0 - cands[best].tau0;
        if (std::abs(dt) <= 1e-9) {
            if (cands[i].omega > cands[best].omega) best = i;
        } else if (dt < 0.0) {
            best = i;
        }
    }
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (i != best && std::abs(cands[i].tau0 - cands[best].tau0) <= 1e-9) {
            r.notes.emplace_back("near-degenerate: two frequencies share the first crossing delay");
            break;
        }
    }

    const Candidate& c0 = cands[best];
    r.status = HopfStatus::crossing;
    r.omega = c0.omega;
    r.tau_critical = c0.tau0;
    for (int kk = 0; kk < opt.k_max; ++kk) r.tau_sequence.push_back(c0.tau0 + 2.0 * std::numbers::pi * kk / c0.omega);
    r.details.emplace_back("u0", c0.u);
    const double slope = cubic_slope(al, be, c0.u);
    r.details.emplace_back("h_prime_u0", slope);
    const double slope_scale = 3.0 * c0.u * c0.u + 2.0 * std::abs(al) * c0.u + std::abs(be);
    if (cr.repeated || std::abs(slope) <= 1e-9 * slope_scale) {
        r.transversality_sign = 0;
        r.notes.emplace_back("non-simple crossing - transversality not asserted");
    } else {
        r.transversality_sign = detail::sign_of(slope);
    }
    return r;
}

[[nodiscard]] inline HopfReport hopf_report(const ModelParams& p, EquilibriumKind kind, const HopfOptions& opt = {}) {
    switch (kind) {
        case EquilibriumKind::E1: return hopf_E1(p, opt);
        case EquilibriumKind::E2: return hopf_E2(p, opt);
        case EquilibriumKind::E3: return hopf_E3(p, opt);
        case EquilibriumKind::E4: return hopf_E4(p, opt);
        case EquilibriumKind::E0: break;
    }
    return detail::not_applicable(EquilibriumKind::E0, {{"a0<0", p.a0, false}},
                                  "E0 is a saddle for every delay");
}

}  // namespace igp
