// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "igp/igp.hpp"
#include "properties.hpp"

using namespace igp;
using namespace igp::testkit;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// 1 ---------------------------------------------------------------------------

Outcome example1_threshold() {
    Outcome o;
    const auto p = example1_params();
    (void)hopf_E1(p);
    const auto t0 = Clock::now();
    const auto r = hopf_E1(p);
    const double ms = ms_since(t0);
    const double tau = r.tau_critical.value_or(NAN);
    o.require(tau == std::numbers::pi / 2, "tau_c != pi/2: " + fmt("%.17g", tau));
    o.require(std::round(tau * 1e4) / 1e4 == 1.5708, "tau_c does not round to 1.5708");
    o.require(ms < 1.0, "runtime " + fmt("%.3f", ms) + " ms");
    if (o.pass) o.detail = "tau_c=" + fmt("%.10f", tau) + ", " + fmt("%.4f", ms) + " ms";
    return o;
}

// 2 ---------------------------------------------------------------------------

Outcome example2_threshold() {
    Outcome o;
    const auto r = hopf_E2(example2_params());
    const double tau = r.tau_critical.value_or(NAN);
    o.require(std::abs(tau - 1.6573) <= 5e-4, "tau=" + fmt("%.10f", tau));
    const double b = r.detail("b").value_or(NAN);
    const double c = r.detail("c").value_or(NAN);
    const double mu = r.detail("mu_plus").value_or(NAN);
    const double re = c - mu * mu + b * mu * std::sin(mu * tau);
    const double im = b * mu * std::cos(mu * tau);
    const double res = std::max(std::abs(re), std::abs(im));
    o.require(res < 1e-9, "split-equation residual " + fmt("%.3e", res));
    if (o.pass) o.detail = "tau=" + fmt("%.10f", tau) + ", mu+=" + fmt("%.11f", mu) + ", residual " + fmt("%.1e", res);
    return o;
}

// 3 ---------------------------------------------------------------------------

Outcome example3_threshold() {
    Outcome o;
    const auto p = example3_params();
    (void)hopf_E4(p);
    const auto t0 = Clock::now();
    const auto e4 = equilibrium(p, EquilibriumKind::E4);
    const auto r = hopf_E4(p);
    const double ms = ms_since(t0);
    const StateTriple expect{0.7778, 0.5778, 0.0556};
    o.require(e4.exists && (e4.coords - expect).max_abs() <= 5e-4, "E4 coordinates off");
    const double tau = r.tau_critical.value_or(NAN);
    o.require(std::abs(tau - 1.7438) <= 5e-4, "tau0=" + fmt("%.10f", tau));
    o.require(r.transversality_sign == 1, "transversality sign " + std::to_string(r.transversality_sign));
    o.require(ms < 10.0, "runtime " + fmt("%.3f", ms) + " ms");
    if (o.pass) {
        o.detail = "E4=(" + fmt("%.4f", e4.coords.x) + "," + fmt("%.4f", e4.coords.y) + "," + fmt("%.4f", e4.coords.z) +
                   "), tau0=" + fmt("%.10f", tau) + ", sign +1, " + fmt("%.4f", ms) + " ms";
    }
    return o;
}

// 4 ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
    Outcome o;
    const auto t0 = Clock::now();
    double worst = 0.0;
    int checked = 0;
    auto compare = [&](const ModelParams& p, EquilibriumKind kind, const std::string& label) {
        const auto r = hopf_report(p, kind);
        if (!r.tau_critical) {
            o.require(false, label + ": no closed-form delay");
            return;
        }
        const double closed = *r.tau_critical;
        const auto qp = char_poly(p, equilibrium(p, kind));
        try {
            const auto c = oracle::first_crossing(oracle::family_of(qp), 0.0, 1.5 * closed, 30);
            const double err = std::abs(c.tau - closed);
            worst = std::max(worst, err);
            o.require(err <= 1e-6, label + ": |oracle-closed|=" + fmt("%.2e", err));
        } catch (const Error& e) {
            o.require(false, label + ": " + e.what());
        }
        ++checked;
    };
    compare(example1_params(), EquilibriumKind::E1, "example1");
    compare(example2_params(), EquilibriumKind::E2, "example2");
    compare(example3_params(), EquilibriumKind::E4, "example3");

    std::mt19937_64 rng(404);
    const std::function<bool(const ModelParams&)> hyp[] = {e1_hypotheses, e2_hypotheses, e3_hypotheses, e4_hypotheses};
    const EquilibriumKind kinds[] = {EquilibriumKind::E1, EquilibriumKind::E2, EquilibriumKind::E3, EquilibriumKind::E4};
    const int draws = 200;
    for (int i = 0; i < draws; ++i) {
        const int k = i % 4;
        compare(draw_until(rng, hyp[k]), kinds[k], std::string("draw ") + std::to_string(i));
    }
    const double ms = ms_since(t0);
    o.require(ms < 60000.0, "runtime " + fmt("%.1f", ms / 1000.0) + " s");
    const std::string summary = std::to_string(checked) + " crossings, worst " + fmt("%.2e", worst) + ", " +
                                fmt("%.1f", ms / 1000.0) + " s";
    o.detail = o.pass ? summary : o.detail + " (" + summary + ")";
    return o;
}

// 5 ---------------------------------------------------------------------------

Outcome stability_switch() {
    Outcome o;
    struct Case {
        const char* preset;
        EquilibriumKind kind;
    };
    double slowest = 0.0;
    std::string summary;
    for (const Case c : {Case{"example1", EquilibriumKind::E1}, Case{"example2", EquilibriumKind::E2},
                         Case{"example3", EquilibriumKind::E4}}) {
        const auto pr = *find_preset(c.preset);
        const double star = *hopf_report(pr.params, c.kind).tau_critical;
        const auto eq = equilibrium(pr.params, c.kind);
        for (double factor : {0.95, 1.05}) {
            const double tau = factor * star;
            const auto t0 = Clock::now();
            const auto tr = integrate(pr.params.with_tau(tau), History{pr.history}, 1500.0, lattice_step(tau, 0.01));
            const auto rep = classify_endstate(tr, eq.coords);
            const double ms = ms_since(t0);
            slowest = std::max(slowest, ms);
            const std::string label = std::string(c.preset) + "@" + fmt("%.2f", factor);
            if (factor < 1.0) {
                o.require(rep.state == EndState::converged && rep.max_deviation < 1e-3,
                          label + ": " + to_string(rep.state) + ", deviation " + fmt("%.2e", rep.max_deviation));
                summary += label + " dev " + fmt("%.1e", rep.max_deviation) + "; ";
            } else {
                o.require(rep.state == EndState::oscillating && rep.peak_to_peak.max_abs() > 0.05,
                          label + ": " + to_string(rep.state));
                summary += label + " p2p " + fmt("%.3f", rep.peak_to_peak.max_abs()) + "; ";
            }
            o.require(ms < 5000.0, label + ": runtime " + fmt("%.0f", ms) + " ms");
        }
    }
    if (o.pass) o.detail = summary + "slowest " + fmt("%.0f", slowest) + " ms";
    return o;
}

// 6 ---------------------------------------------------------------------------

Outcome bifurcation_diagram() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto d = sweep(example3_params(), EquilibriumKind::E4, tau_grid(1.0, 2.4, 0.05), SweepConfig{});
    const double ms = ms_since(t0);
    const double onset = d.hopf_tau.value_or(NAN);
    o.require(d.points.size() == 29, "grid has " + std::to_string(d.points.size()) + " points");
    for (const auto& p : d.points) {
        if (p.tau < onset) {
            o.require(p.amplitude.max_abs() == 0.0, "nonzero amplitude at tau=" + fmt("%.2f", p.tau));
        } else {
            const auto& cp = p.component_periods;
            const bool all = cp[0] && cp[1] && cp[2];
            o.require(all, "missing component period at tau=" + fmt("%.2f", p.tau));
            if (all) {
                const double lo = std::min({*cp[0], *cp[1], *cp[2]});
                const double hi = std::max({*cp[0], *cp[1], *cp[2]});
                o.require(hi - lo <= 0.05 * lo, "component periods disagree at tau=" + fmt("%.2f", p.tau));
            }
        }
    }
    const auto g = amplitude_growth_check(d);
    o.require(g.passed, "growth check: " + g.message);
    o.require(ms < 300000.0, "runtime " + fmt("%.1f", ms / 1000.0) + " s");
    if (o.pass) o.detail = "onset " + fmt("%.4f", onset) + ", growth check passed, " + fmt("%.1f", ms / 1000.0) + " s";
    return o;
}

// 7 ---------------------------------------------------------------------------

Outcome integrator_order() {
    Outcome o;
    const auto p = example3_params().with_tau(1.6);
    const History h{{0.78, 0.58, 0.06}};
    const double T = 40.0;
    const double dt = 1.6 / 20.0;
    const auto coarse = integrate(p, h, T, dt).states.back();
    const auto fine = integrate(p, h, T, dt / 2).states.back();
    const auto ref = integrate(p, h, T, dt / 8).states.back();
    const double ratio = (coarse - ref).max_abs() / (fine - ref).max_abs();
    o.require(ratio >= 12.0 && ratio <= 20.0, "ratio " + fmt("%.2f", ratio));
    if (o.pass) o.detail = "error ratio " + fmt("%.2f", ratio);
    return o;
}

// 8 ---------------------------------------------------------------------------

Outcome structural_invariants() {
    Outcome o;
    const int n = 1000;
    const auto t0 = Clock::now();
    const PropertyResult results[] = {
        tau0_verdicts_match_roots(801, n), hypotheses_match_applicability(802, n), constant_term_identity(803, n),
        delay_sequence_spacing(804, n),    crossings_are_roots(805, n),            e4_sign_pattern(806, n),
        invariant_faces(807, n),
    };
    for (const auto& r : results) {
        o.require(r.draws >= n, r.name + ": only " + std::to_string(r.draws) + " draws");
        o.require(r.violations == 0,
                  r.name + ": " + std::to_string(r.violations) + " violations, first " + r.first_violation);
    }
    if (o.pass) {
        o.detail = std::to_string(std::size(results)) + " properties x " + std::to_string(n) + " draws, 0 violations, " +
                   fmt("%.1f", ms_since(t0) / 1000.0) + " s";
    }
    return o;
}

// 9 ---------------------------------------------------------------------------

Outcome hutchinson_limit() {
    Outcome o;
    // With y0 = z0 = 0 the predator coefficients multiply zero: a2 and a3 drop out.
    ModelParams p = example1_params();
    const double K = p.a0 / p.a1;
    const History h{{0.5, 0.0, 0.0}};
    ModelParams other = p;
    other.a2 = 2.5;
    other.a3 = 0.1;
    std::string summary;
    for (double a0tau : {1.4, 1.7}) {
        const double tau = a0tau / p.a0;
        const double dt = lattice_step(tau, 0.01);
        const auto tr = integrate(p.with_tau(tau), h, 1500.0, dt);
        const auto tr2 = integrate(other.with_tau(tau), h, 1500.0, dt);
        o.require(tr.states == tr2.states, "trajectory depends on a2, a3 at a0*tau=" + fmt("%.1f", a0tau));
        const auto rep = classify_endstate(tr, {K, 0.0, 0.0});
        if (a0tau < std::numbers::pi / 2) {
            o.require(rep.state == EndState::converged, "a0*tau=1.4: " + std::string(to_string(rep.state)));
            summary += "a0*tau=1.4 converged (dev " + fmt("%.1e", rep.max_deviation) + "); ";
        } else {
            o.require(rep.state == EndState::oscillating, "a0*tau=1.7: " + std::string(to_string(rep.state)));
            summary += "a0*tau=1.7 oscillating (p2p " + fmt("%.3f", rep.peak_to_peak.x) + ")";
        }
    }
    if (o.pass) o.detail = summary;
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Criterion all[] = {
        {1, "Example 1 threshold", example1_threshold},
        {2, "Example 2 threshold", example2_threshold},
        {3, "Example 3 threshold and equilibrium", example3_threshold},
        {4, "oracle equivalence", oracle_equivalence},
        {5, "stability-switch simulation", stability_switch},
        {6, "bifurcation diagram", bifurcation_diagram},
        {7, "integrator order", integrator_order},
        {8, "structural invariants", structural_invariants},
        {9, "Hutchinson limit", hutchinson_limit},
    };
    int failed = 0;
    for (const auto& c : all) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(all)) - failed, std::size(all));
    return failed == 0 ? 0 : 1;
}
