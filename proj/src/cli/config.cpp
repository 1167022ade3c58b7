#include "invlab/cli/config.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace invlab {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) { known = true; break; }
        if (!known)
            throw std::runtime_error("config: unknown key '" + it.key() + "' in " + where);
    }
}

template <class T>
void get(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    RunConfig c;
    reject_unknown(j, {"geometry", "viscosity", "params", "flow", "grid", "time",
                       "init", "sweep", "output", "seed"}, "top level");
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        reject_unknown(g, {"profile", "amplitude", "period", "delta", "alpha",
                           "table_file", "table_n", "table_extent"}, "geometry");
        get(g, "profile", c.geometry.profile);
        get(g, "amplitude", c.geometry.amplitude);
        get(g, "period", c.geometry.period);
        get(g, "delta", c.geometry.delta);
        get(g, "alpha", c.geometry.alpha);
        get(g, "table_file", c.geometry.table_file);
        get(g, "table_n", c.geometry.table_n);
        get(g, "table_extent", c.geometry.table_extent);
    }
    if (j.contains("viscosity")) {
        const auto& v = j.at("viscosity");
        reject_unknown(v, {"eta", "nu", "lambda", "kind", "perturbation", "cell_factor"},
                       "viscosity");
        get(v, "eta", c.viscosity.eta);
        get(v, "nu", c.viscosity.nu);
        get(v, "lambda", c.viscosity.lambda);
        get(v, "kind", c.viscosity.kind);
        get(v, "perturbation", c.viscosity.perturbation);
        get(v, "cell_factor", c.viscosity.cell_factor);
    }
    if (j.contains("params")) {
        const auto& p = j.at("params");
        reject_unknown(p, {"k0", "delta0", "epsilon", "beta"}, "params");
        get(p, "k0", c.params.k0);
        get(p, "delta0", c.params.delta0);
        get(p, "epsilon", c.params.epsilon);
        get(p, "beta", c.params.beta);
    }
    if (j.contains("flow")) {
        const auto& f = j.at("flow");
        reject_unknown(f, {"kind", "amplitude", "decay", "pulse_amplitude",
                           "pulse_omega", "q_amplitude"}, "flow");
        get(f, "kind", c.flow.kind);
        get(f, "amplitude", c.flow.amplitude);
        get(f, "decay", c.flow.decay);
        get(f, "pulse_amplitude", c.flow.pulse_amplitude);
        get(f, "pulse_omega", c.flow.pulse_omega);
        get(f, "q_amplitude", c.flow.q_amplitude);
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        reject_unknown(g, {"n1", "n2", "n3", "height", "grading", "wall_factor",
                           "strict"}, "grid");
        get(g, "n1", c.grid.n1);
        get(g, "n2", c.grid.n2);
        get(g, "n3", c.grid.n3);
        get(g, "height", c.grid.height);
        get(g, "grading", c.grid.grading);
        get(g, "wall_factor", c.grid.wall_factor);
        get(g, "strict", c.grid.strict);
    }
    if (j.contains("time")) {
        const auto& t = j.at("time");
        reject_unknown(t, {"t_end", "dt", "snapshot_cadence", "audit_cadence"}, "time");
        get(t, "t_end", c.time.t_end);
        get(t, "dt", c.time.dt);
        get(t, "snapshot_cadence", c.time.snapshot_cadence);
        get(t, "audit_cadence", c.time.audit_cadence);
    }
    if (j.contains("init")) {
        const auto& i = j.at("init");
        reject_unknown(i, {"perturbation"}, "init");
        get(i, "perturbation", c.init.perturbation);
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        reject_unknown(s, {"eta_start", "eta_ratio", "count", "nu_power", "delta_mode"},
                       "sweep");
        get(s, "eta_start", c.sweep.eta_start);
        get(s, "eta_ratio", c.sweep.eta_ratio);
        get(s, "count", c.sweep.count);
        get(s, "nu_power", c.sweep.nu_power);
        get(s, "delta_mode", c.sweep.delta_mode);
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        reject_unknown(o, {"dir"}, "output");
        get(o, "dir", c.output.dir);
    }
    get(j, "seed", c.seed);
    return c;
}

std::string RunConfig::to_json_text() const {
    json j;
    j["geometry"] = {{"profile", geometry.profile},
                     {"amplitude", geometry.amplitude},
                     {"period", geometry.period},
                     {"delta", geometry.delta},
                     {"alpha", geometry.alpha},
                     {"table_file", geometry.table_file},
                     {"table_n", geometry.table_n},
                     {"table_extent", geometry.table_extent}};
    j["viscosity"] = {{"eta", viscosity.eta},
                      {"nu", viscosity.nu},
                      {"lambda", viscosity.lambda},
                      {"kind", viscosity.kind},
                      {"perturbation", viscosity.perturbation},
                      {"cell_factor", viscosity.cell_factor}};
    j["params"] = {{"k0", params.k0},
                   {"delta0", params.delta0},
                   {"epsilon", params.epsilon},
                   {"beta", params.beta}};
    j["flow"] = {{"kind", flow.kind},
                 {"amplitude", flow.amplitude},
                 {"decay", flow.decay},
                 {"pulse_amplitude", flow.pulse_amplitude},
                 {"pulse_omega", flow.pulse_omega},
                 {"q_amplitude", flow.q_amplitude}};
    j["grid"] = {{"n1", grid.n1},     {"n2", grid.n2},
                 {"n3", grid.n3},     {"height", grid.height},
                 {"grading", grid.grading}, {"wall_factor", grid.wall_factor},
                 {"strict", grid.strict}};
    j["time"] = {{"t_end", time.t_end},
                 {"dt", time.dt},
                 {"snapshot_cadence", time.snapshot_cadence},
                 {"audit_cadence", time.audit_cadence}};
    j["init"] = {{"perturbation", init.perturbation}};
    j["sweep"] = {{"eta_start", sweep.eta_start},
                  {"eta_ratio", sweep.eta_ratio},
                  {"count", sweep.count},
                  {"nu_power", sweep.nu_power},
                  {"delta_mode", sweep.delta_mode}};
    j["output"] = {{"dir", output.dir}};
    j["seed"] = seed;
    return j.dump(2) + "\n";
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_json_text(text);
}

void RunConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config " + path);
    out << to_json_text();
}

} // namespace invlab
