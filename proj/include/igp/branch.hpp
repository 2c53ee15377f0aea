#pragma once

/**
 * @file branch.hpp
 * @brief Bifurcation diagram over the delay: analytical equilibrium stability
 *        plus the periodic-orbit amplitude measured by long simulations.
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "igp/critical_delay.hpp"
#include "igp/dde_sim.hpp"
#include "igp/error.hpp"
#include "igp/model.hpp"

namespace igp {

struct SweepConfig {
    double t_end = 3000.0;
    double dt_max = 0.05;
    double transient_fraction = 0.8;
    /// Relative offset of the constant history from the equilibrium.
    double seed_offset = 0.01;
    ClassifyTolerances tolerances{};
};

struct BranchPoint {
    double tau = 0.0;
    bool eq_stable = false;
    EndState classification = EndState::undecided;
    StateTriple amplitude;  // peak-to-peak, zero when converged
    StateTriple max_value;
    std::optional<double> period;
    std::array<std::optional<double>, 3> component_periods;
};

struct BranchDiagram {
    EquilibriumKind kind = EquilibriumKind::E4;
    StateTriple equilibrium;
    std::optional<double> hopf_tau;
    std::vector<BranchPoint> points;
};

[[nodiscard]] inline std::vector<double> tau_grid(double tau_min, double tau_max, double step) {
    if (!(step > 0.0) || !(tau_max >= tau_min) || tau_min < 0.0) {
        throw Error(ErrorCode::invalid_input, "tau grid needs 0 <= tau_min <= tau_max and step > 0");
    }
    std::vector<double> g;
    const auto n = static_cast<std::size_t>(std::floor((tau_max - tau_min) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) g.push_back(tau_min + static_cast<double>(i) * step);
    return g;
}

/// Simulate and classify a single delay value; the building block of sweep.
[[nodiscard]] inline BranchPoint branch_point(const ModelParams& params, const Equilibrium& eq, double tau,
                                              double stable_until, const SweepConfig& cfg) {
    const ModelParams p = params.with_tau(tau);
    const double f = 1.0 + cfg.seed_offset;
    const History h{{f * eq.coords.x, f * eq.coords.y, f * eq.coords.z}};
    const Trajectory tr = integrate_flagged(p, h, cfg.t_end, lattice_step(tau, cfg.dt_max));
    const EndStateReport rep = classify_endstate(tr, eq.coords, cfg.transient_fraction, cfg.tolerances);

    BranchPoint bp;
    bp.tau = tau;
    bp.eq_stable = tau < stable_until;
    bp.classification = rep.state;
    bp.max_value = rep.max_value;
    if (rep.state != EndState::converged) {
        bp.amplitude = rep.peak_to_peak;
        bp.period = rep.period;
        bp.component_periods = rep.periods;
    }
    return bp;
}

[[nodiscard]] inline BranchDiagram sweep(const ModelParams& params, EquilibriumKind kind,
                                         const std::vector<double>& grid, const SweepConfig& cfg = {}) {
    params.validate();
    const Equilibrium eq = equilibrium(params, kind);
    if (!eq.defined || !eq.exists) {
        throw Error(ErrorCode::not_applicable, std::string(to_string(kind)) + " does not exist");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw Error(ErrorCode::invalid_input, "tau grid must be non-negative and strictly increasing");
        }
    }
    HopfOptions opt;
    opt.extend_e4 = true;
    const HopfReport report = hopf_report(params, kind, opt);

    BranchDiagram d;
    d.kind = kind;
    d.equilibrium = eq.coords;
    d.hopf_tau = report.tau_critical;
    // Not applicable means unstable already without delay.
    const double stable_until = report.applicable() ? report.stable_until() : 0.0;
    d.points.reserve(grid.size());
    for (double tau : grid) d.points.push_back(branch_point(params, eq, tau, stable_until, cfg));
    return d;
}

struct GrowthCheck {
    bool passed = false;
    std::optional<double> offending_tau;
    std::string message;
};

/// Amplitude must stay at or below tol_osc before the Hopf delay and be positive and
/// nondecreasing (within a 10% allowance) on the first `window` points after it.
[[nodiscard]] inline GrowthCheck amplitude_growth_check(const BranchDiagram& d, double tol_osc = 0.05,
                                                        std::size_t window = 5, double noise = 0.10) {
    if (!d.hopf_tau || d.points.empty() || !(d.points.front().tau < *d.hopf_tau) ||
        !(d.points.back().tau > *d.hopf_tau)) {
        throw Error(ErrorCode::invalid_input, "grid does not span the Hopf delay");
    }
    GrowthCheck g;
    auto fail = [&](double tau, std::string msg) {
        g.passed = false;
        g.offending_tau = tau;
        g.message = std::move(msg);
        return g;
    };
    std::size_t i = 0;
    for (; i < d.points.size() && d.points[i].tau < *d.hopf_tau; ++i) {
        const auto& a = d.points[i].amplitude;
        if (a.max_abs() > tol_osc) return fail(d.points[i].tau, "nonzero amplitude below the Hopf delay");
    }
    double prev = -1.0;
    for (std::size_t n = 0; n < window && i < d.points.size(); ++n, ++i) {
        const double ax = d.points[i].amplitude.x;
        if (!(ax > 0.0)) return fail(d.points[i].tau, "no oscillation past the Hopf delay");
        if (prev >= 0.0 && ax < (1.0 - noise) * prev) return fail(d.points[i].tau, "amplitude decreases past onset");
        prev = ax;
    }
    g.passed = true;
    g.message = "amplitude emerges from zero at the Hopf delay";
    return g;
}

}  // namespace igp
