#pragma once

/**
 * @file stability.hpp
 * @brief Linearization about an equilibrium and the resulting characteristic
 *        quasi-polynomial
 *
 *   chi(lambda) = lambda^3 + p2 lambda^2 + p1 lambda + p0
 *               + (q2 lambda^2 + q1 lambda + q0) exp(-lambda tau)
 *
 * Builders also record the factored structure the delay analysis relies on
 * (scalar delayed factor at E1, quadratic delayed factor at E2/E3, the sparse
 * cubic form at E4).
 */

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "igp/error.hpp"
#include "igp/model.hpp"

namespace igp {

using Complex = std::complex<double>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

/// X'(t) = m0 X(t) + m1 X(t - tau). Only m1[0][0] can be nonzero.
struct Linearization {
    Matrix3 m0{};
    Matrix3 m1{};
};

[[nodiscard]] inline bool linearizable(const Equilibrium& eq) {
    return eq.defined && (eq.exists || eq.kind == EquilibriumKind::E0 || eq.kind == EquilibriumKind::E1);
}

[[nodiscard]] inline Linearization linearize(const ModelParams& p, const Equilibrium& eq) {
    if (!eq.defined) {
        throw Error(ErrorCode::undefined_equilibrium, "E4 is undefined (S = 0)");
    }
    if (!linearizable(eq)) {
        throw Error(ErrorCode::not_applicable, std::string(to_string(eq.kind)) + " does not exist");
    }
    const auto [x, y, z] = eq.coords;
    Linearization L;
    L.m0 = {{
        {p.a0 - p.a1 * x - p.a2 * y - p.a3 * z, -p.a2 * x, -p.a3 * x},
        {p.b1 * y, -p.b0 + p.b1 * x - p.b3 * z, -p.b3 * y},
        {p.c1 * z, p.c2 * z, -p.c0 + p.c1 * x + p.c2 * y},
    }};
    L.m1[0][0] = -p.a1 * x;
    return L;
}

// Factored forms recorded alongside the coefficients.

/// (lambda - r1)(lambda - r2)(lambda + gain exp(-lambda tau)); the E1 case.
struct ScalarDelayFactor {
    double gain;
    double r1;
    double r2;
};

/// (lambda - r)(lambda^2 + b lambda exp(-lambda tau) + c); the E2 and E3 cases.
struct QuadraticDelayFactor {
    double b;
    double c;
    double r;
};

/// lambda^3 + a lambda + b + (c lambda^2 + d) exp(-lambda tau); the E4 case.
struct SparseCubicForm {
    double a;
    double b;
    double c;
    double d;
};

using QuasiPolynomialShape = std::variant<std::monostate, ScalarDelayFactor, QuadraticDelayFactor, SparseCubicForm>;

struct QuasiPolynomial {
    std::array<double, 3> p{};  // p2, p1, p0
    std::array<double, 3> q{};  // q2, q1, q0
    double tau = 0.0;
    QuasiPolynomialShape shape{};

    [[nodiscard]] QuasiPolynomial with_tau(double t) const {
        QuasiPolynomial out = *this;
        out.tau = t;
        return out;
    }

    [[nodiscard]] Complex p_at(Complex l) const { return ((l + p[0]) * l + p[1]) * l + p[2]; }
    [[nodiscard]] Complex q_at(Complex l) const { return (q[0] * l + q[1]) * l + q[2]; }

    [[nodiscard]] Complex value(Complex l) const { return p_at(l) + q_at(l) * std::exp(-l * tau); }

    /// d chi / d lambda, including the -tau q(lambda) exp(-lambda tau) term.
    [[nodiscard]] Complex derivative(Complex l) const {
        const Complex dp = (3.0 * l + 2.0 * p[0]) * l + p[1];
        const Complex dq = 2.0 * q[0] * l + q[1];
        return dp + (dq - tau * q_at(l)) * std::exp(-l * tau);
    }

    [[nodiscard]] bool finite() const {
        for (double v : p)
            if (!std::isfinite(v)) return false;
        for (double v : q)
            if (!std::isfinite(v)) return false;
        return std::isfinite(tau);
    }
};

/// a, b, c, d of the E4 characteristic equation from P, Q, R, S.
[[nodiscard]] inline SparseCubicForm positive_equilibrium_coefficients(const ModelParams& p) {
    const Constants k = constants(p);
    if (k.S == 0.0) {
        throw Error(ErrorCode::undefined_equilibrium, "E4 is undefined (S = 0)");
    }
    const double S2 = k.S * k.S;
    const double S3 = S2 * k.S;
    const double PQR = k.P * k.Q * k.R;
    return {
        (k.P * k.Q * p.a2 * p.b1 + k.P * k.R * p.a3 * p.c1 + k.Q * k.R * p.b3 * p.c2) / S2,
        PQR * (p.a3 * p.b1 * p.c2 - p.a2 * p.b3 * p.c1) / S3,
        p.a1 * k.P / k.S,
        PQR * p.a1 * p.b3 * p.c2 / S3,
    };
}

/// b-bar = a1 A, c-bar = a2 b0 B, r = R / (a2 b1).
[[nodiscard]] inline QuadraticDelayFactor e2_factor(const ModelParams& p) {
    const Constants k = constants(p);
    return {p.a1 * k.A, p.a2 * p.b0 * k.B, k.R / (p.a2 * p.b1)};
}

/// b-tilde = a1 C, c-tilde = a3 c0 D, r = Q / (a3 c1).
[[nodiscard]] inline QuadraticDelayFactor e3_factor(const ModelParams& p) {
    const Constants k = constants(p);
    return {p.a1 * k.C, p.a3 * p.c0 * k.D, k.Q / (p.a3 * p.c1)};
}

namespace detail {

inline std::array<double, 3> multiply_linear(double r, const std::array<double, 2>& quad) {
    // (l - r)(l^2 + quad0 l + quad1) -> coefficients of l^2, l, 1
    return {quad[0] - r, quad[1] - r * quad[0], -r * quad[1]};
}

}  // namespace detail

/// Generic coefficients of det(lambda I - m0 - m1 exp(-lambda tau)) for the given linearization.
[[nodiscard]] inline QuasiPolynomial quasi_polynomial_from(const Linearization& L, double tau) {
    const auto& m = L.m0;
    const double tr = m[0][0] + m[1][1] + m[2][2];
    const double minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                          m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // det is affine in the (0,0) entry; the delayed part multiplies its cofactor.
    const double g = -L.m1[0][0];
    QuasiPolynomial qp;
    qp.p = {-tr, minors, -det};
    qp.q = {g, -g * (m[1][1] + m[2][2]), g * (m[1][1] * m[2][2] - m[1][2] * m[2][1])};
    qp.tau = tau;
    return qp;
}

[[nodiscard]] inline QuasiPolynomial char_poly(const ModelParams& p, const Equilibrium& eq) {
    p.validate();
    if (!eq.defined) {
        throw Error(ErrorCode::undefined_equilibrium, "E4 is undefined (S = 0)");
    }
    if (!linearizable(eq)) {
        throw Error(ErrorCode::not_applicable, std::string(to_string(eq.kind)) + " does not exist");
    }
    QuasiPolynomial qp;
    qp.tau = p.tau;
    switch (eq.kind) {
        case EquilibriumKind::E0: {
            // (l - a0)(l + b0)(l + c0)
            const auto c = detail::multiply_linear(p.a0, {p.b0 + p.c0, p.b0 * p.c0});
            qp.p = c;
            qp.q = {0.0, 0.0, 0.0};
            break;
        }
        case EquilibriumKind::E1: {
            const Constants k = constants(p);
            const double r1 = p.b1 * k.K - p.b0;
            const double r2 = p.c1 * k.K - p.c0;
            // l (l - r1)(l - r2) + a0 (l - r1)(l - r2) exp(-l tau)
            const double s = -(r1 + r2);
            const double prod = r1 * r2;
            qp.p = {s, prod, 0.0};
            qp.q = {p.a0, p.a0 * s, p.a0 * prod};
            qp.shape = ScalarDelayFactor{p.a0, r1, r2};
            break;
        }
        case EquilibriumKind::E2:
        case EquilibriumKind::E3: {
            const QuadraticDelayFactor f = eq.kind == EquilibriumKind::E2 ? e2_factor(p) : e3_factor(p);
            // (l - r)(l^2 + c) + b l (l - r) exp(-l tau)
            qp.p = detail::multiply_linear(f.r, {0.0, f.c});
            qp.q = {f.b, -f.b * f.r, 0.0};
            qp.shape = f;
            break;
        }
        case EquilibriumKind::E4: {
            const SparseCubicForm f = positive_equilibrium_coefficients(p);
            qp.p = {0.0, f.a, f.b};
            qp.q = {f.c, 0.0, f.d};
            qp.shape = f;
            break;
        }
    }
    return qp;
}

// Delay-free verdicts.

struct Criterion {
    std::string name;
    double value = 0.0;
    bool holds = false;
};

enum class Tau0Class { stable, unstable, marginal };

inline const char* to_string(Tau0Class c) {
    switch (c) {
        case Tau0Class::stable: return "stable";
        case Tau0Class::unstable: return "unstable";
        case Tau0Class::marginal: return "marginal";
    }
    return "?";
}

struct Tau0Verdict {
    EquilibriumKind kind = EquilibriumKind::E0;
    bool stable_at_tau0 = false;
    Tau0Class classification = Tau0Class::unstable;
    std::vector<Criterion> criteria;
    std::string note;
};

/// Routh-Hurwitz test for l^3 + c2 l^2 + c1 l + c0; criteria named after the E4 coefficients.
[[nodiscard]] inline std::vector<Criterion> routh_hurwitz_cubic(double c2, double c1, double c0) {
    return {
        {"a>0", c1, c1 > 0.0},
        {"c>0", c2, c2 > 0.0},
        {"b+d>0", c0, c0 > 0.0},
        {"ac-(b+d)>0", c1 * c2 - c0, c1 * c2 - c0 > 0.0},
    };
}

[[nodiscard]] inline Tau0Verdict tau0_stability(const ModelParams& p, const Equilibrium& eq) {
    p.validate();
    if (!eq.defined) {
        throw Error(ErrorCode::undefined_equilibrium, "E4 is undefined (S = 0)");
    }
    if (!eq.exists) {
        throw Error(ErrorCode::not_applicable, std::string(to_string(eq.kind)) + " does not exist");
    }
    const Constants k = constants(p);
    Tau0Verdict v;
    v.kind = eq.kind;
    switch (eq.kind) {
        case EquilibriumKind::E0:
            v.criteria = {{"a0<0", p.a0, false}};
            v.note = "saddle: eigenvalue a0 > 0";
            break;
        case EquilibriumKind::E1:
            v.criteria = {{"A>K", k.A - k.K, k.A > k.K}, {"C>K", k.C - k.K, k.C > k.K}};
            if (k.A == k.K || k.C == k.K) {
                v.classification = Tau0Class::marginal;
                v.note = "marginal - not classified";
            }
            break;
        case EquilibriumKind::E2:
            v.criteria = {{"R<0", k.R, k.R < 0.0}};
            break;
        case EquilibriumKind::E3:
            v.criteria = {{"Q<0", k.Q, k.Q < 0.0}};
            break;
        case EquilibriumKind::E4: {
            const SparseCubicForm f = positive_equilibrium_coefficients(p);
            if (k.S < 0.0) {
                v.criteria = {{"S>0", k.S, false}};
                v.note = "S<0 forces c<0 and b+d<0";
            } else if (f.b < 0.0) {
                v.criteria = {{"S>0", k.S, true}, {"b<0", f.b, true}};
            } else {
                v.criteria = {{"S>0", k.S, true}};
                for (auto& c : routh_hurwitz_cubic(f.c, f.a, f.b + f.d)) v.criteria.push_back(std::move(c));
                v.note = "b>=0: decided by Routh-Hurwitz, outside the S>0, b<0 sufficient condition";
            }
            break;
        }
    }
    bool all = !v.criteria.empty();
    for (const auto& c : v.criteria) all = all && c.holds;
    v.stable_at_tau0 = all;
    if (v.classification != Tau0Class::marginal) {
        v.classification = all ? Tau0Class::stable : Tau0Class::unstable;
    }
    return v;
}

}  // namespace igp
