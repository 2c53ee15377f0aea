#pragma once

/**
 * @file model.hpp
 * @brief Delayed Lotka-Volterra intraguild-predation model.
 *
 * State (x, y, z) = (basal resource, IG prey, IG predator):
 *
 *   x' = [a0 - a1 x(t-tau) - a2 y - a3 z] x
 *   y' = [-b0 + b1 x - b3 z] y
 *   z' = [-c0 + c1 x + c2 y] z
 *
 * Only the resource self-limitation carries the delay.
 */

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "igp/error.hpp"

namespace igp {

struct ModelParams {
    double a0 = 1.0;
    double a1 = 1.0;
    double a2 = 1.0;
    double a3 = 1.0;
    double b0 = 1.0;
    double b1 = 1.0;
    double b3 = 1.0;
    double c0 = 1.0;
    double c1 = 1.0;
    double c2 = 1.0;
    double tau = 0.0;

    static constexpr std::array<std::string_view, 10> rate_names{
        "a0", "a1", "a2", "a3", "b0", "b1", "b3", "c0", "c1", "c2"};

    [[nodiscard]] std::array<double, 10> rates() const {
        return {a0, a1, a2, a3, b0, b1, b3, c0, c1, c2};
    }

    /// Throws invalid-input unless every rate is finite and > 0 and tau is finite and >= 0.
    void validate() const {
        const auto r = rates();
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (!std::isfinite(r[i]) || !(r[i] > 0.0)) {
                throw Error(ErrorCode::invalid_input,
                            "rate constant " + std::string(rate_names[i]) + " must be finite and positive");
            }
        }
        if (!std::isfinite(tau) || tau < 0.0) {
            throw Error(ErrorCode::invalid_input, "tau must be finite and non-negative");
        }
    }

    [[nodiscard]] ModelParams with_tau(double t) const {
        ModelParams p = *this;
        p.tau = t;
        return p;
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct StateTriple {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
    [[nodiscard]] double max_abs() const { return std::max({std::abs(x), std::abs(y), std::abs(z)}); }

    friend StateTriple operator+(StateTriple a, const StateTriple& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend StateTriple operator-(StateTriple a, const StateTriple& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend StateTriple operator*(double s, StateTriple a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const StateTriple&, const StateTriple&) = default;
};

/// Right-hand side of the model with the delayed resource density supplied separately.
[[nodiscard]] inline StateTriple rhs(const ModelParams& p, const StateTriple& s, double delayed_x) {
    if (!s.finite() || !std::isfinite(delayed_x)) {
        throw Error(ErrorCode::invalid_input, "rhs: non-finite state");
    }
    if (delayed_x < 0.0) {
        throw Error(ErrorCode::invalid_input, "rhs: delayed density must be non-negative");
    }
    return {
        (p.a0 - p.a1 * delayed_x - p.a2 * s.y - p.a3 * s.z) * s.x,
        (-p.b0 + p.b1 * s.x - p.b3 * s.z) * s.y,
        (-p.c0 + p.c1 * s.x + p.c2 * s.y) * s.z,
    };
}

/// Closed-form constants behind the equilibrium coordinates.
struct Constants {
    double K, A, B, C, D;
    double P, Q, R, S;
};

[[nodiscard]] inline Constants constants(const ModelParams& p) {
    Constants k{};
    k.K = p.a0 / p.a1;
    k.A = p.b0 / p.b1;
    k.B = (p.a0 * p.b1 - p.a1 * p.b0) / (p.a2 * p.b1);
    k.C = p.c0 / p.c1;
    k.D = (p.a0 * p.c1 - p.a1 * p.c0) / (p.a3 * p.c1);
    k.P = p.a0 * p.b3 * p.c2 - p.a2 * p.b3 * p.c0 + p.a3 * p.b0 * p.c2;
    k.Q = -p.a0 * p.b3 * p.c1 + p.a1 * p.b3 * p.c0 - p.a3 * p.b0 * p.c1 + p.a3 * p.b1 * p.c0;
    k.R = p.a0 * p.b1 * p.c2 - p.a1 * p.b0 * p.c2 + p.a2 * p.b0 * p.c1 - p.a2 * p.b1 * p.c0;
    k.S = p.a1 * p.b3 * p.c2 - p.a2 * p.b3 * p.c1 + p.a3 * p.b1 * p.c2;
    return k;
}

enum class EquilibriumKind { E0, E1, E2, E3, E4 };

inline const char* to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::E0: return "E0";
        case EquilibriumKind::E1: return "E1";
        case EquilibriumKind::E2: return "E2";
        case EquilibriumKind::E3: return "E3";
        case EquilibriumKind::E4: return "E4";
    }
    return "?";
}

inline std::optional<EquilibriumKind> parse_kind(std::string_view s) {
    for (auto k : {EquilibriumKind::E0, EquilibriumKind::E1, EquilibriumKind::E2, EquilibriumKind::E3,
                   EquilibriumKind::E4}) {
        if (s == to_string(k)) return k;
    }
    return std::nullopt;
}

struct Equilibrium {
    EquilibriumKind kind = EquilibriumKind::E0;
    StateTriple coords;
    bool exists = false;
    /// False only for E4 when S == 0; coords are NaN in that case.
    bool defined = true;
    std::vector<std::pair<std::string, double>> derived;

    [[nodiscard]] std::optional<double> get(std::string_view name) const {
        for (const auto& [n, v] : derived) {
            if (n == name) return v;
        }
        return std::nullopt;
    }
};

/// All five non-negative equilibrium candidates, in order E0..E4.
[[nodiscard]] inline std::vector<Equilibrium> equilibria(const ModelParams& p) {
    p.validate();
    const Constants k = constants(p);
    std::vector<Equilibrium> out;
    out.reserve(5);

    out.push_back({EquilibriumKind::E0, {0.0, 0.0, 0.0}, true, true, {}});
    out.push_back({EquilibriumKind::E1, {k.K, 0.0, 0.0}, true, true, {{"K", k.K}}});
    out.push_back({EquilibriumKind::E2, {k.A, k.B, 0.0}, k.B > 0.0, true, {{"A", k.A}, {"B", k.B}}});
    out.push_back({EquilibriumKind::E3, {k.C, 0.0, k.D}, k.D > 0.0, true, {{"C", k.C}, {"D", k.D}}});

    Equilibrium e4{EquilibriumKind::E4, {}, false, true, {{"P", k.P}, {"Q", k.Q}, {"R", k.R}, {"S", k.S}}};
    if (k.S == 0.0) {
        const double nan = std::nan("");
        e4.coords = {nan, nan, nan};
        e4.defined = false;
    } else {
        e4.coords = {k.P / k.S, k.Q / k.S, k.R / k.S};
        e4.exists = e4.coords.x > 0.0 && e4.coords.y > 0.0 && e4.coords.z > 0.0;
    }
    out.push_back(std::move(e4));
    return out;
}

[[nodiscard]] inline Equilibrium equilibrium(const ModelParams& p, EquilibriumKind kind) {
    return equilibria(p)[static_cast<std::size_t>(kind)];
}

/// Max-norm of the right-hand side evaluated at a steady state.
[[nodiscard]] inline double residual(const ModelParams& p, const StateTriple& s) {
    return rhs(p, s, s.x).max_abs();
}

// Parameter sets and initial conditions of the three worked examples.

struct Preset {
    std::string name;
    ModelParams params;
    StateTriple history;
};

[[nodiscard]] inline ModelParams example1_params() {
    ModelParams p;
    p.a0 = 1.0;
    p.a1 = 0.5;
    p.a2 = 1.0;
    p.a3 = 0.6;
    p.b0 = 0.75;
    p.b1 = 0.25;
    p.b3 = 0.5;
    p.c0 = 0.5;
    p.c1 = 0.15;
    p.c2 = 0.3;
    return p;
}

[[nodiscard]] inline ModelParams example2_params() {
    ModelParams p = example1_params();
    p.b1 = 0.5;
    return p;
}

[[nodiscard]] inline ModelParams example3_params() {
    ModelParams p = example1_params();
    p.b1 = 1.0;
    p.c1 = 0.42;
    return p;
}

[[nodiscard]] inline std::vector<Preset> presets() {
    return {
        {"example1", example1_params(), {2.0, 1.0, 1.0}},
        {"example2", example2_params(), {2.0, 1.0, 1.0}},
        {"example3", example3_params(), {0.78, 0.58, 0.06}},
    };
}

[[nodiscard]] inline std::optional<Preset> find_preset(std::string_view name) {
    for (auto& pr : presets()) {
        if (pr.name == name) return pr;
    }
    return std::nullopt;
}

}  // namespace igp
