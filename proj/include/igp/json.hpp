#pragma once

// JSON encodings of the public result types (nlohmann/json).

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "igp/branch.hpp"
#include "igp/critical_delay.hpp"
#include "igp/error.hpp"
#include "igp/model.hpp"
#include "igp/stability.hpp"

namespace igp {

using Json = nlohmann::ordered_json;

namespace detail {

/// JSON has no inf/nan; those become null.
inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json triple(const StateTriple& s) { return Json::array({number(s.x), number(s.y), number(s.z)}); }

}  // namespace detail

inline Json params_to_json(const ModelParams& p) {
    Json j = Json::object();
    const auto r = p.rates();
    for (std::size_t i = 0; i < r.size(); ++i) j[std::string(ModelParams::rate_names[i])] = r[i];
    j["tau"] = p.tau;
    return j;
}

/// Strict decoding: the ten rate keys are required, "tau" is optional (default 0), nothing else is allowed.
inline ModelParams params_from_json(const Json& j, const ModelParams& base = {}) {
    if (!j.is_object()) throw Error(ErrorCode::invalid_input, "parameter file must hold a JSON object");
    ModelParams p = base;
    double* fields[] = {&p.a0, &p.a1, &p.a2, &p.a3, &p.b0, &p.b1, &p.b3, &p.c0, &p.c1, &p.c2};
    for (std::size_t i = 0; i < ModelParams::rate_names.size(); ++i) {
        const std::string key(ModelParams::rate_names[i]);
        if (!j.contains(key)) throw Error(ErrorCode::invalid_input, "missing parameter \"" + key + "\"");
        if (!j[key].is_number()) throw Error(ErrorCode::invalid_input, "parameter \"" + key + "\" is not a number");
        *fields[i] = j[key].get<double>();
    }
    if (j.contains("tau")) {
        if (!j["tau"].is_number()) throw Error(ErrorCode::invalid_input, "parameter \"tau\" is not a number");
        p.tau = j["tau"].get<double>();
    }
    for (const auto& [key, _] : j.items()) {
        bool known = key == "tau";
        for (auto n : ModelParams::rate_names) known = known || key == n;
        if (!known) throw Error(ErrorCode::invalid_input, "unknown parameter \"" + key + "\"");
    }
    p.validate();
    return p;
}

inline Json to_json(const Equilibrium& e) {
    Json j;
    j["kind"] = to_string(e.kind);
    j["coords"] = detail::triple(e.coords);
    j["exists"] = e.exists;
    j["defined"] = e.defined;
    Json d = Json::object();
    for (const auto& [n, v] : e.derived) d[n] = detail::number(v);
    j["derived"] = d;
    return j;
}

inline Json to_json(const Criterion& c) {
    return Json{{"name", c.name}, {"value", detail::number(c.value)}, {"holds", c.holds}};
}

inline Json to_json(const Tau0Verdict& v) {
    Json j;
    j["kind"] = to_string(v.kind);
    j["stable_at_tau0"] = v.stable_at_tau0;
    j["classification"] = to_string(v.classification);
    j["criteria"] = Json::array();
    for (const auto& c : v.criteria) j["criteria"].push_back(to_json(c));
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

inline Json to_json(const HopfReport& r) {
    Json j;
    j["eq_kind"] = to_string(r.kind);
    j["status"] = to_string(r.status);
    if (r.status == HopfStatus::absolutely_stable) {
        j["tau_critical"] = "absolutely-stable";
    } else if (r.tau_critical) {
        j["tau_critical"] = *r.tau_critical;
    } else {
        j["tau_critical"] = nullptr;
    }
    j["omega"] = r.omega;
    j["tau_sequence"] = r.tau_sequence;
    if (!r.candidate_sequence.empty()) j["candidate_sequence"] = r.candidate_sequence;
    j["transversality_sign"] = r.transversality_sign;
    j["stable_interval"] = Json::array({0.0, detail::number(r.stable_until())});
    j["hypotheses"] = Json::array();
    for (const auto& c : r.hypotheses) j["hypotheses"].push_back(to_json(c));
    if (!r.branches.empty()) {
        j["branches"] = Json::array();
        for (const auto& b : r.branches) {
            j["branches"].push_back({{"omega", b.omega}, {"tau_sequence", b.tau_sequence}, {"direction", b.direction}});
        }
    }
    if (!r.details.empty()) {
        Json d = Json::object();
        for (const auto& [n, v] : r.details) d[n] = detail::number(v);
        j["details"] = d;
    }
    if (!r.notes.empty()) j["notes"] = r.notes;
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

inline Json to_json(const GrowthCheck& g) {
    Json j{{"passed", g.passed}, {"message", g.message}};
    j["offending_tau"] = g.offending_tau ? Json(*g.offending_tau) : Json(nullptr);
    return j;
}

}  // namespace igp
