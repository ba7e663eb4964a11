#pragma once

// Run configuration: JSON parsing with strict key checking, canonical
// defaults, sweep-parameter paths, and a round-trippable echo.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cascade/errors.hpp"
#include "cascade/mcwf.hpp"
#include "cascade/model.hpp"
#include "cascade/obe.hpp"

namespace cascade {

enum class Scenario { lambda_basic, lambda_jitter, polarization_entanglement, coherent_obe };
enum class Engine { mcwf, oracle, both };

inline std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::lambda_basic: return "lambda_basic";
        case Scenario::lambda_jitter: return "lambda_jitter";
        case Scenario::polarization_entanglement: return "polarization_entanglement";
        case Scenario::coherent_obe: return "coherent_obe";
    }
    throw error("unreachable scenario");
}

inline std::string to_string(Engine e) {
    switch (e) {
        case Engine::mcwf: return "mcwf";
        case Engine::oracle: return "oracle";
        case Engine::both: return "both";
    }
    throw error("unreachable engine");
}

inline Scenario scenario_from_string(const std::string& s) {
    if (s == "lambda_basic") return Scenario::lambda_basic;
    if (s == "lambda_jitter") return Scenario::lambda_jitter;
    if (s == "polarization_entanglement") return Scenario::polarization_entanglement;
    if (s == "coherent_obe") return Scenario::coherent_obe;
    throw config_error("scenario: unknown value '" + s + "'");
}

inline Engine engine_from_string(const std::string& s) {
    if (s == "mcwf") return Engine::mcwf;
    if (s == "oracle") return Engine::oracle;
    if (s == "both") return Engine::both;
    throw config_error("engine: unknown value '" + s + "'");
}

struct SweepSpec {
    std::string path;
    std::vector<double> values;

    bool operator==(const SweepSpec&) const = default;
};

struct EnsembleSpec {
    int n_traj = 10000;
    std::uint64_t master_seed = 1;

    bool operator==(const EnsembleSpec&) const = default;
};

struct OutputSpec {
    std::string csv = "results.csv";
    std::string json = "summary.json";
    std::string svg;          // optional
    std::string trajectories; // optional per-jump dump
    std::string trace_csv;    // optional oracle time-series export

    bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
    Scenario scenario = Scenario::lambda_basic;
    CascadeParams params;  // canonical defaults live in CascadeParams
    double beta = 0.01;    // coherent_obe only
    IntegratorConfig integrator;
    EnsembleSpec ensemble;
    std::optional<SweepSpec> sweep;
    OutputSpec outputs;
    Engine engine = Engine::both;

    ObeParams obe_params() const {
        return ObeParams{beta, params.gamma31_T, params.gamma32_T, params.eta};
    }

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

/// Mutable access to a swept parameter by dotted path.
inline double* sweep_target(RunConfig& cfg, const std::string& path) {
    auto& p = cfg.params;
    if (path == "params.gamma31_S") return &p.gamma31_S;
    if (path == "params.gamma30_S") return &p.gamma30_S;
    if (path == "params.gamma31_T") return &p.gamma31_T;
    if (path == "params.gamma32_T") return &p.gamma32_T;
    if (path == "params.gamma21_T") return &p.gamma21_T;
    if (path == "params.eta") return &p.eta;
    if (path == "params.eta_S") return &p.eta_S;
    if (path == "params.beta") return &cfg.beta;
    if (path == "params.pulse.omega0") return &p.pulse.omega0;
    if (path == "params.pulse.tau") return &p.pulse.tau;
    if (path == "params.pulse.t0") return &p.pulse.t0;
    return nullptr;
}

inline void check_keys(const nlohmann::json& obj, const std::string& prefix,
                       std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw config_error(prefix + key + ": unknown key");
    }
}

inline double get_num(const nlohmann::json& obj, const std::string& prefix,
                      const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw config_error(prefix + key + ": expected a number");
    return v.get<double>();
}

} // namespace detail

/// Full validation of a parsed config (ranges, sweep path, scenario defaults).
inline void finalize_config(RunConfig& cfg) {
    cfg.params.validate();
    cfg.integrator.validate();
    if (cfg.ensemble.n_traj < 1) throw config_error("ensemble.n_traj: must be >= 1");
    if (cfg.scenario == Scenario::coherent_obe) cfg.obe_params().validate();
    // The jitter study compares gamma30_S = 0 against a nonzero value;
    // defaults to gamma30_S = gamma31_S when left unset.
    if (cfg.scenario == Scenario::lambda_jitter && cfg.params.gamma30_S == 0.0)
        cfg.params.gamma30_S = cfg.params.gamma31_S;
    if (cfg.sweep) {
        if (cfg.sweep->values.empty()) throw config_error("sweep.values: must be non-empty");
        for (double v : cfg.sweep->values)
            if (!std::isfinite(v)) throw config_error("sweep.values: must be finite");
        RunConfig probe = cfg;
        if (detail::sweep_target(probe, cfg.sweep->path) == nullptr)
            throw config_error("sweep.path: unknown parameter '" + cfg.sweep->path + "'");
        if (cfg.scenario == Scenario::lambda_jitter)
            throw config_error("sweep: lambda_jitter defines its own comparison sweep");
    }
    if (cfg.outputs.csv.empty()) throw config_error("outputs.csv: must be non-empty");
    if (cfg.outputs.json.empty()) throw config_error("outputs.json: must be non-empty");
}

/// Parse and validate a JSON configuration document. Unknown keys are
/// rejected with their paths; omitted keys take the canonical defaults.
inline RunConfig validate_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config root must be a JSON object");

    detail::check_keys(j, "",
                       {"scenario", "params", "integrator", "ensemble", "sweep",
                        "outputs", "engine"});
    RunConfig cfg;
    if (j.contains("scenario")) {
        if (!j["scenario"].is_string()) throw config_error("scenario: expected a string");
        cfg.scenario = scenario_from_string(j["scenario"].get<std::string>());
    }
    if (j.contains("engine")) {
        if (!j["engine"].is_string()) throw config_error("engine: expected a string");
        cfg.engine = engine_from_string(j["engine"].get<std::string>());
    }
    if (j.contains("params")) {
        const auto& p = j["params"];
        if (!p.is_object()) throw config_error("params: expected an object");
        detail::check_keys(p, "params.",
                           {"gamma31_S", "gamma30_S", "gamma31_T", "gamma32_T",
                            "gamma21_T", "eta", "eta_S", "beta", "pulse"});
        auto& cp = cfg.params;
        cp.gamma31_S = detail::get_num(p, "params.", "gamma31_S", cp.gamma31_S);
        cp.gamma30_S = detail::get_num(p, "params.", "gamma30_S", cp.gamma30_S);
        cp.gamma31_T = detail::get_num(p, "params.", "gamma31_T", cp.gamma31_T);
        cp.gamma32_T = detail::get_num(p, "params.", "gamma32_T", cp.gamma32_T);
        cp.gamma21_T = detail::get_num(p, "params.", "gamma21_T", cp.gamma21_T);
        cp.eta = detail::get_num(p, "params.", "eta", cp.eta);
        cp.eta_S = detail::get_num(p, "params.", "eta_S", cp.eta_S);
        cfg.beta = detail::get_num(p, "params.", "beta", cfg.beta);
        if (p.contains("pulse")) {
            const auto& pl = p["pulse"];
            if (!pl.is_object()) throw config_error("params.pulse: expected an object");
            detail::check_keys(pl, "params.pulse.", {"omega0", "tau", "t0"});
            cp.pulse.omega0 = detail::get_num(pl, "params.pulse.", "omega0", cp.pulse.omega0);
            cp.pulse.tau = detail::get_num(pl, "params.pulse.", "tau", cp.pulse.tau);
            cp.pulse.t0 = detail::get_num(pl, "params.pulse.", "t0", cp.pulse.t0);
        }
    }
    if (j.contains("integrator")) {
        const auto& it = j["integrator"];
        if (!it.is_object()) throw config_error("integrator: expected an object");
        detail::check_keys(it, "integrator.", {"dt", "t_end", "jump_time_tol", "ss_tol"});
        auto& ic = cfg.integrator;
        ic.dt = detail::get_num(it, "integrator.", "dt", ic.dt);
        ic.t_end = detail::get_num(it, "integrator.", "t_end", ic.t_end);
        ic.jump_time_tol = detail::get_num(it, "integrator.", "jump_time_tol", ic.jump_time_tol);
        ic.ss_tol = detail::get_num(it, "integrator.", "ss_tol", ic.ss_tol);
    }
    if (j.contains("ensemble")) {
        const auto& en = j["ensemble"];
        if (!en.is_object()) throw config_error("ensemble: expected an object");
        detail::check_keys(en, "ensemble.", {"n_traj", "master_seed"});
        if (en.contains("n_traj")) {
            if (!en["n_traj"].is_number_integer())
                throw config_error("ensemble.n_traj: expected an integer");
            cfg.ensemble.n_traj = en["n_traj"].get<int>();
        }
        if (en.contains("master_seed")) {
            if (!en["master_seed"].is_number_unsigned() && !en["master_seed"].is_number_integer())
                throw config_error("ensemble.master_seed: expected a non-negative integer");
            cfg.ensemble.master_seed = en["master_seed"].get<std::uint64_t>();
        }
    }
    if (j.contains("sweep") && !j["sweep"].is_null()) {
        const auto& sw = j["sweep"];
        if (!sw.is_object()) throw config_error("sweep: expected an object");
        detail::check_keys(sw, "sweep.", {"path", "values"});
        SweepSpec spec;
        if (!sw.contains("path") || !sw["path"].is_string())
            throw config_error("sweep.path: expected a string");
        spec.path = sw["path"].get<std::string>();
        if (!sw.contains("values") || !sw["values"].is_array())
            throw config_error("sweep.values: expected an array of numbers");
        for (const auto& v : sw["values"]) {
            if (!v.is_number()) throw config_error("sweep.values: expected numbers");
            spec.values.push_back(v.get<double>());
        }
        cfg.sweep = std::move(spec);
    }
    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        if (!o.is_object()) throw config_error("outputs: expected an object");
        detail::check_keys(o, "outputs.", {"csv", "json", "svg", "trajectories", "trace_csv"});
        auto get_str = [&](const char* key, std::string fallback) {
            if (!o.contains(key)) return fallback;
            if (!o.at(key).is_string())
                throw config_error(std::string("outputs.") + key + ": expected a string");
            return o.at(key).get<std::string>();
        };
        cfg.outputs.csv = get_str("csv", cfg.outputs.csv);
        cfg.outputs.json = get_str("json", cfg.outputs.json);
        cfg.outputs.svg = get_str("svg", cfg.outputs.svg);
        cfg.outputs.trajectories = get_str("trajectories", cfg.outputs.trajectories);
        cfg.outputs.trace_csv = get_str("trace_csv", cfg.outputs.trace_csv);
    }

    finalize_config(cfg);
    return cfg;
}

/// Echo of the effective configuration; validate_config(dump) == original.
inline nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["scenario"] = to_string(cfg.scenario);
    j["engine"] = to_string(cfg.engine);
    j["params"] = {{"gamma31_S", cfg.params.gamma31_S}, {"gamma30_S", cfg.params.gamma30_S},
                   {"gamma31_T", cfg.params.gamma31_T}, {"gamma32_T", cfg.params.gamma32_T},
                   {"gamma21_T", cfg.params.gamma21_T}, {"eta", cfg.params.eta},
                   {"eta_S", cfg.params.eta_S},         {"beta", cfg.beta},
                   {"pulse",
                    {{"omega0", cfg.params.pulse.omega0},
                     {"tau", cfg.params.pulse.tau},
                     {"t0", cfg.params.pulse.t0}}}};
    j["integrator"] = {{"dt", cfg.integrator.dt},
                       {"t_end", cfg.integrator.t_end},
                       {"jump_time_tol", cfg.integrator.jump_time_tol},
                       {"ss_tol", cfg.integrator.ss_tol}};
    j["ensemble"] = {{"n_traj", cfg.ensemble.n_traj},
                     {"master_seed", cfg.ensemble.master_seed}};
    if (cfg.sweep)
        j["sweep"] = {{"path", cfg.sweep->path}, {"values", cfg.sweep->values}};
    j["outputs"] = {{"csv", cfg.outputs.csv},
                    {"json", cfg.outputs.json},
                    {"svg", cfg.outputs.svg},
                    {"trajectories", cfg.outputs.trajectories},
                    {"trace_csv", cfg.outputs.trace_csv}};
    return j;
}

} // namespace cascade
