#pragma once

/**
 * @file commands.hpp
 * @brief The analyze / simulate / branch / spectrum commands, independent of argument parsing.
 *
 * Every command takes a fully resolved RunConfig and returns its outputs as
 * strings so the CLI only has to route them to files or streams.
 */

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "igp/branch.hpp"
#include "igp/critical_delay.hpp"
#include "igp/dde_sim.hpp"
#include "igp/json.hpp"
#include "igp/model.hpp"
#include "igp/spectrum_oracle.hpp"
#include "igp/stability.hpp"

namespace igp {

struct RunConfig {
    std::string command;
    std::string preset;
    ModelParams params;
    StateTriple history{1.0, 1.0, 1.0};
    std::optional<EquilibriumKind> kind;
    double t_end = 1500.0;
    double dt = 0.01;
    double tau_min = 0.0;
    double tau_max = 0.0;
    double tau_step = 0.05;
    std::size_t stride = 1;
    std::size_t roots = 4;
    double transient_fraction = 0.8;
    double tol_conv = 1e-3;
    double tol_osc = 0.05;
    double seed_offset = 0.01;
};

inline Json to_json(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    if (!c.preset.empty()) j["preset"] = c.preset;
    j["params"] = params_to_json(c.params);
    j["history"] = detail::triple(c.history);
    if (c.kind) j["equilibrium"] = to_string(*c.kind);
    j["t_end"] = c.t_end;
    j["dt"] = c.dt;
    j["tau_min"] = c.tau_min;
    j["tau_max"] = c.tau_max;
    j["tau_step"] = c.tau_step;
    j["stride"] = c.stride;
    j["roots"] = c.roots;
    j["transient_fraction"] = c.transient_fraction;
    j["tol_conv"] = c.tol_conv;
    j["tol_osc"] = c.tol_osc;
    j["seed_offset"] = c.seed_offset;
    return j;
}

/// Fixed 17-significant-digit formatting for CSV cells.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// The equilibrium a command refers to when none is named: the highest-index
/// existing equilibrium that is stable without delay, else the highest-index existing one.
[[nodiscard]] inline EquilibriumKind default_equilibrium(const ModelParams& p) {
    const auto eqs = equilibria(p);
    for (auto it = eqs.rbegin(); it != eqs.rend(); ++it) {
        if (it->exists && it->defined && it->kind != EquilibriumKind::E0 && tau0_stability(p, *it).stable_at_tau0) {
            return it->kind;
        }
    }
    for (auto it = eqs.rbegin(); it != eqs.rend(); ++it) {
        if (it->exists && it->defined) return it->kind;
    }
    return EquilibriumKind::E1;
}

[[nodiscard]] inline EquilibriumKind resolved_kind(const RunConfig& c) {
    return c.kind ? *c.kind : default_equilibrium(c.params);
}

// analyze ----------------------------------------------------------------------

[[nodiscard]] inline Json cmd_analyze(const RunConfig& c) {
    c.params.validate();
    Json out;
    out["config"] = to_json(c);
    out["equilibria"] = Json::array();
    out["tau0"] = Json::array();
    const auto eqs = equilibria(c.params);
    for (const auto& e : eqs) {
        Json je = to_json(e);
        if (e.exists && e.defined) je["residual"] = residual(c.params, e.coords);
        out["equilibria"].push_back(je);
        if (e.exists && e.defined) out["tau0"].push_back(to_json(tau0_stability(c.params, e)));
    }
    HopfOptions opt;
    opt.extend_e4 = true;
    out["hopf"] = Json::array();
    for (auto k : {EquilibriumKind::E1, EquilibriumKind::E2, EquilibriumKind::E3, EquilibriumKind::E4}) {
        out["hopf"].push_back(to_json(hopf_report(c.params, k, opt)));
    }
    return out;
}

// simulate ---------------------------------------------------------------------

struct SimulateOutput {
    std::string csv;
    Json sidecar;
    EndStateReport end_state;
    StateTriple final_state;
};

[[nodiscard]] inline SimulateOutput cmd_simulate(const RunConfig& c) {
    if (c.stride == 0) throw Error(ErrorCode::invalid_input, "stride must be >= 1");
    const double dt = lattice_step(c.params.tau, c.dt);
    const Trajectory tr = integrate(c.params, History{c.history}, c.t_end, dt);
    const EquilibriumKind kind = resolved_kind(c);
    const Equilibrium eq = equilibrium(c.params, kind);

    SimulateOutput out;
    out.final_state = tr.states.back();
    out.end_state = classify_endstate(tr, eq.coords, c.transient_fraction, {c.tol_conv, c.tol_osc, 0.05});

    std::ostringstream csv;
    csv << "t,x,y,z\n";
    for (std::size_t i = 0; i < tr.size(); i += c.stride) {
        const auto& s = tr.states[i];
        csv << format_number(tr.time(i)) << ',' << format_number(s.x) << ',' << format_number(s.y) << ','
            << format_number(s.z) << '\n';
    }
    out.csv = csv.str();

    RunConfig resolved = c;
    resolved.dt = dt;
    resolved.kind = kind;
    out.sidecar["config"] = to_json(resolved);
    out.sidecar["equilibrium"] = to_json(eq);
    out.sidecar["classification"] = to_string(out.end_state.state);
    out.sidecar["max_deviation"] = out.end_state.max_deviation;
    out.sidecar["peak_to_peak"] = detail::triple(out.end_state.peak_to_peak);
    out.sidecar["period"] = out.end_state.period ? Json(*out.end_state.period) : Json(nullptr);
    out.sidecar["final_state"] = detail::triple(out.final_state);
    out.sidecar["clamp_count"] = tr.clamp_count;
    return out;
}

// branch -----------------------------------------------------------------------

struct BranchOutput {
    std::string csv;
    Json summary;
    BranchDiagram diagram;
    std::optional<GrowthCheck> growth;
};

[[nodiscard]] inline BranchOutput cmd_branch(const RunConfig& c) {
    const EquilibriumKind kind = resolved_kind(c);
    SweepConfig cfg;
    cfg.t_end = c.t_end;
    cfg.dt_max = c.dt;
    cfg.transient_fraction = c.transient_fraction;
    cfg.seed_offset = c.seed_offset;
    cfg.tolerances = {c.tol_conv, c.tol_osc, 0.05};

    BranchOutput out;
    out.diagram = sweep(c.params, kind, tau_grid(c.tau_min, c.tau_max, c.tau_step), cfg);
    const auto& d = out.diagram;

    std::ostringstream csv;
    csv << "tau,eq_stable,class,amp_x,amp_y,amp_z,period\n";
    for (const auto& p : d.points) {
        csv << format_number(p.tau) << ',' << (p.eq_stable ? 1 : 0) << ',' << to_string(p.classification) << ','
            << format_number(p.amplitude.x) << ',' << format_number(p.amplitude.y) << ','
            << format_number(p.amplitude.z) << ',' << (p.period ? format_number(*p.period) : std::string{}) << '\n';
    }
    out.csv = csv.str();

    RunConfig resolved = c;
    resolved.kind = kind;
    out.summary["config"] = to_json(resolved);
    out.summary["equilibrium"] = detail::triple(d.equilibrium);
    out.summary["hopf_tau"] = d.hopf_tau ? Json(*d.hopf_tau) : Json(nullptr);
    if (d.hopf_tau && !d.points.empty() && d.points.front().tau < *d.hopf_tau && d.points.back().tau > *d.hopf_tau) {
        out.growth = amplitude_growth_check(d, c.tol_osc);
        out.summary["amplitude_growth_check"] = to_json(*out.growth);
    } else {
        out.summary["amplitude_growth_check"] = nullptr;
    }
    Json maxima = Json::array();
    for (const auto& p : d.points) maxima.push_back(detail::triple(p.max_value));
    out.summary["max_value"] = maxima;
    return out;
}

// spectrum ---------------------------------------------------------------------

struct SpectrumOutput {
    std::string csv;
    Json sidecar;
};

[[nodiscard]] inline SpectrumOutput cmd_spectrum(const RunConfig& c) {
    if (c.roots == 0) throw Error(ErrorCode::invalid_input, "roots must be >= 1");
    const EquilibriumKind kind = resolved_kind(c);
    const QuasiPolynomial qp = char_poly(c.params, equilibrium(c.params, kind));
    std::ostringstream csv;
    csv << "tau,re_lambda,im_lambda,residual\n";
    std::size_t empty = 0;
    for (double tau : tau_grid(c.tau_min, c.tau_max, c.tau_step)) {
        const auto roots = oracle::rightmost_roots(qp.with_tau(tau), c.roots);
        if (roots.empty()) ++empty;
        for (const auto& r : roots) {
            csv << format_number(tau) << ',' << format_number(r.lambda.real()) << ',' << format_number(r.lambda.imag())
                << ',' << format_number(r.residual) << '\n';
        }
    }
    SpectrumOutput out;
    out.csv = csv.str();
    RunConfig resolved = c;
    resolved.kind = kind;
    out.sidecar["config"] = to_json(resolved);
    out.sidecar["empty_scans"] = empty;
    return out;
}

/// Exit code for an error: 2 for usage-level problems, 1 for computational failures.
[[nodiscard]] inline int exit_code_for(ErrorCode code) {
    return (code == ErrorCode::invalid_input || code == ErrorCode::invalid_step) ? 2 : 1;
}

}  // namespace igp
