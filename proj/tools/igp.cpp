// Command-line front end: analyze | simulate | branch | spectrum.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "igp/commands.hpp"

namespace {

struct Flags {
    std::string params_file;
    std::string preset;
    std::optional<double> tau;
    std::map<std::string, double> rates;
    std::vector<double> history;
    std::string eq;
    std::string out;
    std::string json;
};

void add_common(CLI::App* sub, Flags& f, igp::RunConfig& c) {
    sub->add_option("--params", f.params_file, "JSON parameter file");
    sub->add_option("--preset", f.preset, "example1 | example2 | example3")
        ->check(CLI::IsMember({"example1", "example2", "example3"}));
    sub->add_option("--tau", f.tau, "delay");
    for (auto name : igp::ModelParams::rate_names) {
        const std::string key(name);
        sub->add_option_function<double>("--" + key, [&f, key](double v) { f.rates[key] = v; }, "override " + key);
    }
    sub->add_option("--history", f.history, "constant initial state x0 y0 z0")->expected(3);
    sub->add_option("--eq", f.eq, "equilibrium E1..E4 (default: the delay-free stable one)")
        ->check(CLI::IsMember({"E0", "E1", "E2", "E3", "E4"}));
    sub->add_option("--t-end", c.t_end, "simulation horizon");
    sub->add_option("--dt", c.dt, "maximum step; adjusted down to divide tau");
    sub->add_option("--tau-min", c.tau_min);
    sub->add_option("--tau-max", c.tau_max);
    sub->add_option("--tau-step", c.tau_step);
    sub->add_option("--stride", c.stride, "keep every n-th CSV row");
    sub->add_option("--roots", c.roots, "rightmost roots per delay (spectrum)");
    sub->add_option("--transient-fraction", c.transient_fraction);
    sub->add_option("--tol-conv", c.tol_conv);
    sub->add_option("--tol-osc", c.tol_osc);
    sub->add_option("--seed-offset", c.seed_offset);
    sub->add_option("--out", f.out, "output file (default stdout)");
    sub->add_option("--json", f.json, "JSON sidecar path (default <out>.json, else stderr)");
}

void resolve(const Flags& f, igp::RunConfig& c) {
    if (!f.preset.empty()) {
        const auto pr = igp::find_preset(f.preset);
        c.preset = pr->name;
        c.params = pr->params;
        c.history = pr->history;
    }
    if (!f.params_file.empty()) {
        std::ifstream in(f.params_file);
        if (!in) throw igp::Error(igp::ErrorCode::invalid_input, "cannot open " + f.params_file);
        igp::Json j;
        try {
            in >> j;
        } catch (const igp::Json::parse_error& e) {
            throw igp::Error(igp::ErrorCode::invalid_input, std::string("malformed parameter file: ") + e.what());
        }
        c.params = igp::params_from_json(j, c.params);
    } else if (f.preset.empty() && f.rates.size() != igp::ModelParams::rate_names.size()) {
        throw igp::Error(igp::ErrorCode::invalid_input, "give --preset, --params, or all ten rate flags");
    }
    for (const auto& [k, v] : f.rates) {
        igp::Json j = igp::params_to_json(c.params);
        j[k] = v;
        c.params = igp::params_from_json(j, c.params);
    }
    if (f.tau) c.params.tau = *f.tau;
    if (!f.history.empty()) c.history = {f.history[0], f.history[1], f.history[2]};
    if (!f.eq.empty()) c.kind = igp::parse_kind(f.eq);
    c.params.validate();
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream o(path);
    if (!o) throw igp::Error(igp::ErrorCode::invalid_input, "cannot write " + path);
    o << text;
}

void emit_sidecar(const igp::Json& j, const Flags& f) {
    const std::string path = !f.json.empty() ? f.json : (!f.out.empty() ? f.out + ".json" : std::string{});
    if (path.empty()) {
        std::cerr << j.dump(2) << '\n';
    } else {
        emit(j.dump(2) + "\n", path);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability and Hopf-bifurcation analysis of the delayed intraguild-predation model"};
    app.require_subcommand(1);

    Flags f;
    igp::RunConfig c;
    auto* analyze = app.add_subcommand("analyze", "equilibria, delay-free verdicts and Hopf thresholds as JSON");
    auto* simulate = app.add_subcommand("simulate", "integrate the delayed system; CSV t,x,y,z");
    auto* branch = app.add_subcommand("branch", "sweep tau; CSV tau,eq_stable,class,amp_x,amp_y,amp_z,period");
    auto* spectrum = app.add_subcommand("spectrum", "rightmost characteristic roots over a tau grid");
    for (auto* s : {analyze, simulate, branch, spectrum}) add_common(s, f, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        resolve(f, c);
        if (analyze->parsed()) {
            c.command = "analyze";
            emit(igp::cmd_analyze(c).dump(2) + "\n", f.out);
        } else if (simulate->parsed()) {
            c.command = "simulate";
            const auto r = igp::cmd_simulate(c);
            emit(r.csv, f.out);
            emit_sidecar(r.sidecar, f);
        } else if (branch->parsed()) {
            c.command = "branch";
            const auto r = igp::cmd_branch(c);
            emit(r.csv, f.out);
            emit_sidecar(r.summary, f);
        } else if (spectrum->parsed()) {
            c.command = "spectrum";
            const auto r = igp::cmd_spectrum(c);
            emit(r.csv, f.out);
            emit_sidecar(r.sidecar, f);
        }
    } catch (const igp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return igp::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
