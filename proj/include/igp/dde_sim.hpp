#pragma once

/**
 * @file dde_sim.hpp
 * @brief Fixed-step RK4 integration of the delayed model from a constant history.
 *
 * The step divides tau exactly, so every delayed lookup x(t - tau + c dt)
 * with c in {0, 1/2, 1} falls on a stored node or on the midpoint of a stored
 * segment. Midpoints use cubic Hermite interpolation with the stored
 * derivatives, which keeps the global error O(dt^4). Segments never straddle
 * the derivative jumps at multiples of tau.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "igp/error.hpp"
#include "igp/model.hpp"

namespace igp {

/// Constant initial function on [-tau, 0].
struct History {
    StateTriple value;
};

struct Trajectory {
    double dt = 0.0;
    double tau = 0.0;
    StateTriple history;
    std::vector<StateTriple> states;
    std::vector<StateTriple> derivatives;
    /// Steps where some component undershot -1e-12 and was reset to 0.
    std::size_t clamp_count = 0;
    bool diverged = false;

    [[nodiscard]] std::size_t size() const { return states.size(); }
    [[nodiscard]] double time(std::size_t i) const { return static_cast<double>(i) * dt; }
    [[nodiscard]] double t_end() const { return states.empty() ? 0.0 : time(states.size() - 1); }

    /// Dense output on [-tau, t_end()].
    [[nodiscard]] StateTriple value_at(double t) const {
        if (t <= 0.0) return t < 0.0 ? history : states.front();
        const double s = t / dt;
        auto j = static_cast<std::size_t>(std::floor(s));
        if (j + 1 >= states.size()) return states.back();
        const double th = s - static_cast<double>(j);
        return hermite(j, th);
    }

    [[nodiscard]] StateTriple hermite(std::size_t j, double th) const {
        const double th2 = th * th;
        const double th3 = th2 * th;
        const double h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
        const double h10 = th3 - 2.0 * th2 + th;
        const double h01 = -2.0 * th3 + 3.0 * th2;
        const double h11 = th3 - th2;
        return h00 * states[j] + (h10 * dt) * derivatives[j] + h01 * states[j + 1] + (h11 * dt) * derivatives[j + 1];
    }
};

/// Largest dt <= dt_max that divides tau into at least 20 steps (dt_max itself when tau = 0).
[[nodiscard]] inline double lattice_step(double tau, double dt_max) {
    if (!(dt_max > 0.0)) throw Error(ErrorCode::invalid_step, "dt must be positive");
    if (tau == 0.0) return dt_max;
    const double m = std::max(20.0, std::ceil(tau / dt_max - 1e-9));
    return tau / m;
}

namespace detail {

inline Trajectory integrate_impl(const ModelParams& p, const History& h, double t_end, double dt,
                                 bool throw_on_divergence) {
    p.validate();
    if (!h.value.finite() || h.value.x < 0.0 || h.value.y < 0.0 || h.value.z < 0.0) {
        throw Error(ErrorCode::invalid_input, "history must be finite and non-negative");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw Error(ErrorCode::invalid_input, "t_end must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::invalid_step, "dt must be positive");

    std::size_t lag = 0;
    if (p.tau > 0.0) {
        const double ratio = p.tau / dt;
        const double m = std::round(ratio);
        if (m < 20.0 || std::abs(ratio - m) > 1e-9 * m) {
            throw Error(ErrorCode::invalid_step, "dt must equal tau/m for an integer m >= 20");
        }
        lag = static_cast<std::size_t>(m);
    }

    const auto n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
    Trajectory tr;
    tr.dt = dt;
    tr.tau = p.tau;
    tr.history = h.value;
    tr.states.reserve(n + 1);
    tr.derivatives.reserve(n + 1);

    // x(t_i - tau + c dt) for c in {0, 1/2, 1}
    auto delayed = [&](std::size_t i, int half_steps) -> double {
        // i < lag puts t_i - tau + c dt in [-tau, 0]
        if (i < lag) return h.value.x;
        const std::size_t j = i - lag;
        if (half_steps == 0) return tr.states[j].x;
        if (half_steps == 2) return tr.states[j + 1].x;
        return std::max(0.0, tr.hermite(j, 0.5).x);
    };

    tr.states.push_back(h.value);
    tr.derivatives.push_back(rhs(p, h.value, h.value.x));

    for (std::size_t i = 0; i < n; ++i) {
        const StateTriple& s = tr.states[i];
        StateTriple next;
        if (lag == 0) {
            auto f = [&](const StateTriple& u) { return rhs(p, u, std::max(0.0, u.x)); };
            const StateTriple k1 = tr.derivatives[i];
            const StateTriple k2 = f(s + (0.5 * dt) * k1);
            const StateTriple k3 = f(s + (0.5 * dt) * k2);
            const StateTriple k4 = f(s + dt * k3);
            next = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } else {
            const double xd_mid = delayed(i, 1);
            const StateTriple k1 = tr.derivatives[i];
            const StateTriple k2 = rhs(p, s + (0.5 * dt) * k1, xd_mid);
            const StateTriple k3 = rhs(p, s + (0.5 * dt) * k2, xd_mid);
            const StateTriple k4 = rhs(p, s + dt * k3, delayed(i, 2));
            next = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }

        if (!next.finite() || next.max_abs() > 1e12) {
            if (throw_on_divergence) {
                throw Error(ErrorCode::divergence, "state exceeded 1e12 at t=" + std::to_string(tr.time(i + 1)));
            }
            tr.diverged = true;
            return tr;
        }
        if (next.x < -1e-12 || next.y < -1e-12 || next.z < -1e-12) ++tr.clamp_count;
        next = {std::max(0.0, next.x), std::max(0.0, next.y), std::max(0.0, next.z)};
        tr.states.push_back(next);
        const double xd_node = lag == 0 ? next.x : (i + 1 < lag ? h.value.x : tr.states[i + 1 - lag].x);
        tr.derivatives.push_back(rhs(p, next, xd_node));
    }
    return tr;
}

}  // namespace detail

/// Throws divergence if the state leaves [-1e12, 1e12].
[[nodiscard]] inline Trajectory integrate(const ModelParams& p, const History& h, double t_end, double dt) {
    return detail::integrate_impl(p, h, t_end, dt, true);
}

/// Same as integrate, but a blow-up truncates the trajectory and sets `diverged`.
[[nodiscard]] inline Trajectory integrate_flagged(const ModelParams& p, const History& h, double t_end, double dt) {
    return detail::integrate_impl(p, h, t_end, dt, false);
}

// End-state classification -----------------------------------------------------

enum class EndState { converged, oscillating, diverged, undecided };

inline const char* to_string(EndState e) {
    switch (e) {
        case EndState::converged: return "converged";
        case EndState::oscillating: return "oscillating";
        case EndState::diverged: return "diverged";
        case EndState::undecided: return "undecided";
    }
    return "?";
}

struct ClassifyTolerances {
    double converged = 1e-3;
    double oscillating = 0.05;
    double period_variation = 0.05;
};

struct EndStateReport {
    EndState state = EndState::undecided;
    double max_deviation = 0.0;
    StateTriple peak_to_peak;
    StateTriple max_value;
    /// Mean spacing of successive maxima per component; absent with fewer than three maxima.
    std::array<std::optional<double>, 3> periods;
    std::optional<double> period;
};

namespace detail {

struct PeriodEstimate {
    double mean = 0.0;
    double variation = 0.0;
};

/// Maxima above the window midline, refined by a parabola through the three samples.
inline std::optional<PeriodEstimate> estimate_period(const std::vector<double>& v, double dt, double t0) {
    if (v.size() < 5) return std::nullopt;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double mid = 0.5 * (*lo + *hi);
    if (!(*hi > *lo)) return std::nullopt;
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] > mid && v[i] > v[i - 1] && v[i] >= v[i + 1]) {
            const double curv = v[i - 1] - 2.0 * v[i] + v[i + 1];
            const double shift = curv != 0.0 ? 0.5 * (v[i - 1] - v[i + 1]) / curv : 0.0;
            const double t = t0 + (static_cast<double>(i) + shift) * dt;
            if (!peaks.empty() && t - peaks.back() < 2.0 * dt) continue;
            peaks.push_back(t);
        }
    }
    if (peaks.size() < 3) return std::nullopt;
    double smin = peaks[1] - peaks[0];
    double smax = smin;
    for (std::size_t i = 2; i < peaks.size(); ++i) {
        const double s = peaks[i] - peaks[i - 1];
        smin = std::min(smin, s);
        smax = std::max(smax, s);
    }
    const double mean = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
    return PeriodEstimate{mean, (smax - smin) / mean};
}

}  // namespace detail

[[nodiscard]] inline EndStateReport classify_endstate(const Trajectory& tr, const StateTriple& eq,
                                                      double transient_fraction = 0.8,
                                                      const ClassifyTolerances& tol = {}) {
    if (!(transient_fraction > 0.0 && transient_fraction < 1.0)) {
        throw Error(ErrorCode::invalid_input, "transient_fraction must lie in (0, 1)");
    }
    EndStateReport rep;
    if (tr.diverged) {
        rep.state = EndState::diverged;
        return rep;
    }
    if (tr.states.empty()) return rep;

    const auto start = static_cast<std::size_t>(std::floor(transient_fraction * static_cast<double>(tr.size() - 1)));
    std::array<std::vector<double>, 3> comp;
    for (std::size_t i = start; i < tr.size(); ++i) {
        const StateTriple& s = tr.states[i];
        rep.max_deviation = std::max(rep.max_deviation, (s - eq).max_abs());
        comp[0].push_back(s.x);
        comp[1].push_back(s.y);
        comp[2].push_back(s.z);
    }
    std::array<double, 3> p2p{};
    std::array<double, 3> mx{};
    for (int c = 0; c < 3; ++c) {
        const auto [lo, hi] = std::minmax_element(comp[c].begin(), comp[c].end());
        p2p[c] = *hi - *lo;
        mx[c] = *hi;
    }
    rep.peak_to_peak = {p2p[0], p2p[1], p2p[2]};
    rep.max_value = {mx[0], mx[1], mx[2]};

    int lead = 0;
    for (int c = 0; c < 3; ++c) {
        if (p2p[c] > 1e-9) {
            if (auto est = detail::estimate_period(comp[c], tr.dt, tr.time(start))) rep.periods[c] = est->mean;
        }
        if (p2p[c] > p2p[lead]) lead = c;
    }

    if (rep.max_deviation < tol.converged) {
        rep.state = EndState::converged;
        return rep;
    }
    if (p2p[lead] > tol.oscillating) {
        const auto est = detail::estimate_period(comp[lead], tr.dt, tr.time(start));
        if (est && est->variation < tol.period_variation) {
            rep.state = EndState::oscillating;
            rep.period = est->mean;
            return rep;
        }
    }
    rep.state = EndState::undecided;
    if (rep.periods[lead]) rep.period = rep.periods[lead];
    return rep;
}

}  // namespace igp
