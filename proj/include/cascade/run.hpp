#pragma once

// Scenario orchestration: resolve the sweep, run the selected engine(s),
// write CSV/JSON/SVG (and optional trajectory/trace dumps).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cascade/config.hpp"
#include "cascade/csv.hpp"
#include "cascade/lindblad.hpp"
#include "cascade/mcwf.hpp"
#include "cascade/model.hpp"
#include "cascade/obe.hpp"
#include "cascade/svg.hpp"
#include "cascade/version.hpp"

namespace cascade {

struct RunOptions {
    std::string out_dir = ".";
    int n_threads = 0; // 0 = hardware concurrency
};

struct RunOutcome {
    std::vector<CsvRow> rows;
    nlohmann::json summary;
    std::string csv_path;
    std::string json_path;
    std::string svg_path; // empty if not written
};

namespace detail {

inline std::string join_path(const std::string& dir, const std::string& file) {
    if (file.empty() || file.front() == '/') return file;
    if (dir.empty() || dir == ".") return file;
    return dir.back() == '/' ? dir + file : dir + "/" + file;
}

inline ScenarioModel build_scenario_model(const RunConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::lambda_basic:
        case Scenario::lambda_jitter:
            return build_basic_model(cfg.params);
        case Scenario::polarization_entanglement:
            return build_entanglement_model(cfg.params);
        case Scenario::coherent_obe:
            return build_coherent_drive_model(cfg.obe_params());
    }
    throw error("unreachable scenario");
}

/// Index of the recorded sample closest to t.
inline std::size_t nearest_sample(const std::vector<double>& times, double t) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
    return best;
}

} // namespace detail

/// Execute a validated config. Writes the configured output files under
/// opt.out_dir and returns the rows plus the JSON summary.
inline RunOutcome run(const RunConfig& cfg_in, const RunOptions& opt = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    RunConfig cfg = cfg_in;
    finalize_config(cfg);

    // Resolve sweep points. lambda_jitter becomes its built-in comparison.
    std::vector<std::pair<std::string, double>> points;
    RunConfig base = cfg;
    if (cfg.scenario == Scenario::lambda_jitter) {
        points = {{"params.gamma30_S", 0.0}, {"params.gamma30_S", cfg.params.gamma30_S}};
    } else if (cfg.sweep) {
        for (double v : cfg.sweep->values) points.emplace_back(cfg.sweep->path, v);
    } else {
        points.emplace_back("none", 0.0);
    }
    const bool single_point = points.size() == 1;
    if (!cfg.outputs.trace_csv.empty() && !single_point)
        throw config_error("outputs.trace_csv requires a single-point run");
    if (!cfg.outputs.trajectories.empty() && !single_point)
        throw config_error("outputs.trajectories requires a single-point run");

    const bool want_oracle = cfg.engine != Engine::mcwf;
    const bool want_mcwf = cfg.engine != Engine::oracle;

    RunOutcome out;
    nlohmann::json results = nlohmann::json::array();
    std::map<std::string, PlotSeries> mcwf_series, oracle_series;
    std::vector<CsvRow> trace_rows;
    std::vector<std::string> traj_dump_lines;

    for (const auto& [path, value] : points) {
        RunConfig pt = base;
        if (path != "none") {
            double* target = detail::sweep_target(pt, path);
            if (target == nullptr) throw config_error("sweep.path: unknown parameter '" + path + "'");
            *target = value;
            pt.params.validate();
        }
        // Jitter comparison: the scattering channel broadens the source line,
        // so the drive is rescaled to keep the source a unit-efficiency
        // single-photon emitter (its pumping rate scales as Omega^2/Gamma_tot^2).
        if (cfg.scenario == Scenario::lambda_jitter && pt.params.gamma31_S > 0.0)
            pt.params.pulse.omega0 = base.params.pulse.omega0 *
                                     (base.params.gamma31_S + pt.params.gamma30_S) /
                                     base.params.gamma31_S;
        const ScenarioModel model = detail::build_scenario_model(pt);

        nlohmann::json point;
        point["sweep_param"] = path;
        point["sweep_value"] = value;

        if (want_oracle) {
            MasterTrace trace = integrate_master(model, pt.integrator);
            nlohmann::json ob;
            for (const auto& [name, series] : trace.observables) {
                const double v = series.back();
                if (model.projectors.count(name))
                    out.rows.push_back({path, value, "oracle", name, v, 0.0, 0, 0});
                ob[name] = v;
            }
            if (pt.scenario == Scenario::polarization_entanglement) {
                const double succ = final_value(trace, "success");
                const double total = pt.params.eta_S * succ;
                out.rows.push_back({path, value, "oracle", "total_success", total, 0.0, 0, 0});
                ob["total_success"] = total;
                if (succ > 1e-12)
                    ob["conditional_bell_fidelity"] = final_value(trace, "bell") / succ;
            }
            ob["trace_drift"] = trace.max_trace_drift;
            ob["min_eigenvalue"] = trace.min_eigenvalue;
            ob["steady_state_ok"] = trace.steady_state_ok;
            point["oracle"] = ob;

            for (const auto& [name, series] : trace.observables)
                if (model.projectors.count(name)) {
                    auto& s = oracle_series[name];
                    s.label = name + " (oracle)";
                    s.x.push_back(value);
                    s.y.push_back(series.back());
                }

            if (pt.scenario == Scenario::coherent_obe) {
                const ObeParams obe = pt.obe_params();
                const auto& times = trace.times;
                const auto& full = trace.observables.at("output_flux");
                const auto& s13 = trace.linear.at("sigma13");
                std::vector<double> coh(times.size());
                for (std::size_t i = 0; i < times.size(); ++i)
                    coh[i] = coherent_flux(obe, s13[i]);
                for (std::size_t i = 0; i < times.size(); ++i) {
                    trace_rows.push_back({"t", times[i], "oracle", "output_flux", full[i], 0.0, 0, 0});
                    trace_rows.push_back(
                        {"t", times[i], "oracle", "output_flux_coherent", coh[i], 0.0, 0, 0});
                }
                double peak = 0.0;
                for (double f : full) peak = std::max(peak, f);
                const double omega_c = std::abs(drive_rabi(obe));
                const double t_center =
                    omega_c > 0.0 ? std::sqrt(1.0 / (obe.gamma31 * omega_c)) : 0.0;
                const std::size_t ic = detail::nearest_sample(times, t_center);
                const Amplitude mof = mean_output_field(obe);
                point["obe"] = {{"mean_output_field_re", mof.real()},
                                {"mean_output_field_im", mof.imag()},
                                {"mean_output_field_abs", std::abs(mof)},
                                {"closed_form_flux", std::norm(mof)},
                                {"omega_c", omega_c},
                                {"window_center_t", times[ic]},
                                {"peak_flux", peak},
                                {"window_center_flux", full[ic]},
                                {"window_center_flux_coherent", coh[ic]}};
                auto& sf = oracle_series["output_flux"];
                sf.label = "output_flux (oracle)";
                sf.x = times;
                sf.y = full;
                auto& sc = oracle_series["output_flux_coherent"];
                sc.label = "coherent flux (oracle)";
                sc.x = times;
                sc.y = coh;
            } else if (!cfg.outputs.trace_csv.empty()) {
                for (std::size_t i = 0; i < trace.times.size(); ++i)
                    for (const auto& [name, series] : trace.observables)
                        trace_rows.push_back(
                            {"t", trace.times[i], "oracle", name, series[i], 0.0, 0, 0});
            }
        }

        if (want_mcwf) {
            const bool keep = !cfg.outputs.trajectories.empty();
            EnsembleResult res = run_ensemble(model, pt.integrator, pt.ensemble.n_traj,
                                              pt.ensemble.master_seed, opt.n_threads, keep);
            nlohmann::json ob;
            for (const auto& [name, ms] : res.observables) {
                out.rows.push_back({path, value, "mcwf", name, ms.first, ms.second,
                                    res.n_traj, pt.ensemble.master_seed});
                ob[name] = {{"mean", ms.first}, {"stderr", ms.second}};
                auto& s = mcwf_series[name];
                s.label = name + " (mcwf)";
                s.x.push_back(value);
                s.y.push_back(ms.first);
                s.yerr.push_back(ms.second);
            }
            if (pt.scenario == Scenario::polarization_entanglement) {
                const auto succ = res.observables.at("success");
                const double total = pt.params.eta_S * succ.first;
                out.rows.push_back({path, value, "mcwf", "total_success", total,
                                    pt.params.eta_S * succ.second, res.n_traj,
                                    pt.ensemble.master_seed});
                ob["total_success"] = {{"mean", total},
                                       {"stderr", pt.params.eta_S * succ.second}};
                if (succ.first > 1e-12)
                    ob["conditional_bell_fidelity"] =
                        res.observables.at("bell").first / succ.first;
            }
            nlohmann::json counts;
            for (const auto& [label, n] : res.channel_counts) counts[label] = n;
            point["mcwf"] = {{"observables", ob},
                             {"channel_counts", counts},
                             {"n_traj", res.n_traj},
                             {"horizon_warnings", res.horizon_warnings}};
            if (keep && res.records) {
                for (std::size_t ti = 0; ti < res.records->size(); ++ti) {
                    const auto& rec = (*res.records)[ti];
                    for (std::size_t ji = 0; ji < rec.jumps.size(); ++ji)
                        traj_dump_lines.push_back(std::to_string(ti) + "," +
                                                  std::to_string(rec.seed) + "," +
                                                  std::to_string(ji) + "," +
                                                  format_double(rec.jumps[ji].time) + "," +
                                                  rec.jumps[ji].channel);
                }
            }
        }

        results.push_back(std::move(point));
    }

    // Scenario-level derived numbers.
    nlohmann::json extras;
    if (cfg.scenario == Scenario::lambda_jitter) {
        auto absorbed_at = [&](std::size_t i) -> double {
            const auto& pt = results.at(i);
            if (pt.contains("oracle")) return pt["oracle"]["absorbed"].get<double>();
            return pt["mcwf"]["observables"]["absorbed"]["mean"].get<double>();
        };
        const double base_v = absorbed_at(0), jit_v = absorbed_at(1);
        extras["absorbed_no_jitter"] = base_v;
        extras["absorbed_with_jitter"] = jit_v;
        if (base_v > 0.0) extras["jitter_relative_decrease"] = (base_v - jit_v) / base_v;
    }

    // Output files.
    const bool obe_trace_in_csv =
        cfg.scenario == Scenario::coherent_obe && want_oracle;
    std::vector<CsvRow> csv_rows = out.rows;
    if (obe_trace_in_csv)
        csv_rows.insert(csv_rows.end(), trace_rows.begin(), trace_rows.end());

    out.csv_path = detail::join_path(opt.out_dir, cfg.outputs.csv);
    write_csv(out.csv_path, csv_rows);

    if (!cfg.outputs.trace_csv.empty())
        write_csv(detail::join_path(opt.out_dir, cfg.outputs.trace_csv), trace_rows);

    if (!cfg.outputs.trajectories.empty()) {
        std::string dump = "trajectory,seed,jump_index,t,channel\n";
        for (const auto& line : traj_dump_lines) dump += line + "\n";
        write_file(detail::join_path(opt.out_dir, cfg.outputs.trajectories), dump);
    }

    if (!cfg.outputs.svg.empty()) {
        std::vector<PlotSeries> series;
        PlotOptions popt;
        if (cfg.scenario == Scenario::coherent_obe) {
            for (const char* name : {"output_flux", "output_flux_coherent"})
                if (oracle_series.count(name)) series.push_back(oracle_series[name]);
            popt.title = "Output photon flux under weak coherent drive";
            popt.x_label = "t [1/Gamma31]";
            popt.y_label = "flux";
        } else {
            const std::string key =
                cfg.scenario == Scenario::polarization_entanglement ? "success" : "absorbed";
            if (oracle_series.count(key)) series.push_back(oracle_series[key]);
            if (mcwf_series.count(key)) series.push_back(mcwf_series[key]);
            popt.title = key + " vs " + points[0].first;
            popt.x_label = points[0].first;
            popt.y_label = key + " probability";
            popt.y_min = 0.0;
            popt.y_max = 1.0;
        }
        if (!series.empty()) {
            out.svg_path = detail::join_path(opt.out_dir, cfg.outputs.svg);
            emit_plot(series, out.svg_path, popt);
        }
    }

    const auto t_stop = std::chrono::steady_clock::now();
    out.summary["version"] = kVersion;
    out.summary["config"] = config_to_json(cfg);
    out.summary["wall_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t_stop - t_start).count();
    out.summary["results"] = std::move(results);
    if (!extras.empty()) out.summary["extras"] = std::move(extras);

    out.json_path = detail::join_path(opt.out_dir, cfg.outputs.json);
    write_file(out.json_path, out.summary.dump(2) + "\n");
    return out;
}

/// Built-in preset configurations behind the CLI subcommands.
inline RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    if (name == "sweep-ratio") {
        cfg.sweep = SweepSpec{"params.gamma32_T", {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0}};
        cfg.outputs = {"sweep_ratio.csv", "sweep_ratio.json", "sweep_ratio.svg", "", ""};
    } else if (name == "sweep-eta") {
        cfg.sweep = SweepSpec{"params.eta", {0.0, 0.25, 0.5, 0.75, 1.0}};
        cfg.outputs = {"sweep_eta.csv", "sweep_eta.json", "sweep_eta.svg", "", ""};
    } else if (name == "jitter") {
        cfg.scenario = Scenario::lambda_jitter;
        cfg.outputs = {"jitter.csv", "jitter.json", "jitter.svg", "", ""};
    } else if (name == "entangle") {
        cfg.scenario = Scenario::polarization_entanglement;
        cfg.params.eta = 0.3;
        cfg.params.eta_S = 0.3;
        cfg.outputs = {"entangle.csv", "entangle.json", "entangle.svg", "", ""};
    } else if (name == "obe") {
        cfg.scenario = Scenario::coherent_obe;
        cfg.engine = Engine::oracle;
        cfg.integrator.t_end = 30.0;
        cfg.outputs = {"obe.csv", "obe.json", "obe.svg", "", ""};
    } else {
        throw config_error("unknown preset '" + name + "'");
    }
    finalize_config(cfg);
    return cfg;
}

} // namespace cascade
