#include <catch2/catch.hpp>

#include <cmath>

#include "cascade/lindblad.hpp"
#include "cascade/mcwf.hpp"
#include "cascade/obe.hpp"
#include "cascade/rng.hpp"

using namespace cascade;

namespace {

// flux series helpers on a coherent-drive trace
struct FluxTrace {
    std::vector<double> t;
    std::vector<double> full;
    std::vector<double> coherent;
};

FluxTrace flux_trace(const ObeParams& p, double t_end, double dt = 2e-3) {
    const ScenarioModel m = build_coherent_drive_model(p);
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    const MasterTrace trace = integrate_master(m, cfg, 0.05);
    FluxTrace out;
    out.t = trace.times;
    out.full = trace.observables.at("output_flux");
    for (const auto& s13 : trace.linear.at("sigma13"))
        out.coherent.push_back(coherent_flux(p, s13));
    return out;
}

double at_time(const FluxTrace& f, const std::vector<double>& series, double t) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < f.t.size(); ++i)
        if (std::abs(f.t[i] - t) < std::abs(f.t[best] - t)) best = i;
    return series[best];
}

} // namespace

TEST_CASE("mean output field: closed-form substitutions") {
    REQUIRE(std::abs(mean_output_field({1.0, 1.0, 1.0, 1.0})) <= 1e-12); // extinction
    REQUIRE(mean_output_field({1.0, 1.0, 0.0, 1.0}).real() == Approx(-1.0)); // two-level
    REQUIRE(mean_output_field({0.5, 1.0, 3.0, 1.0}).real() == Approx(0.25));
    ObeParams bad{1.0, 0.0, 0.0, 1.0};
    REQUIRE_THROWS_AS(mean_output_field(bad), config_error);
}

TEST_CASE("perfect extinction iff equal rates at eta = 1") {
    for (double g32 : {0.1, 0.5, 0.9, 1.1, 2.0, 7.0}) {
        const double v = std::abs(mean_output_field({1.0, 1.0, g32, 1.0}));
        if (g32 == 1.0) continue;
        REQUIRE(v > 0.0);
    }
    REQUIRE(std::abs(mean_output_field({1.0, 2.5, 2.5, 1.0})) <= 1e-12);
}

TEST_CASE("mean output field is affine in beta") {
    Xoshiro256 rng(53);
    for (int rep = 0; rep < 20; ++rep) {
        ObeParams p{2.0 * rng.uniform() - 1.0, 0.1 + rng.uniform(), 2.0 * rng.uniform(),
                    rng.uniform()};
        ObeParams p2 = p;
        p2.beta = 3.0 * p.beta;
        REQUIRE(std::abs(mean_output_field(p2) - 3.0 * mean_output_field(p)) <= 1e-12);
    }
}

TEST_CASE("quasi-steady coherence: consistency with the closed form") {
    Xoshiro256 rng(59);
    for (int rep = 0; rep < 100; ++rep) {
        ObeParams p{2.0 * rng.uniform() - 1.0, 0.05 + 2.0 * rng.uniform(),
                    2.0 * rng.uniform(), rng.uniform()};
        const Amplitude c13 = quasi_steady_coherence(p);
        REQUIRE(std::abs(output_field_from_coherence(p, c13) - mean_output_field(p)) <=
                1e-12);
    }
    ObeParams zero{0.0, 1.0, 1.0, 1.0};
    REQUIRE(std::abs(quasi_steady_coherence(zero)) == 0.0);
    // equal rates, eta = 1: |<s13>| = beta / sqrt(Gamma31)
    ObeParams eq{0.2, 4.0, 4.0, 1.0};
    REQUIRE(std::abs(quasi_steady_coherence(eq)) == Approx(0.2 / 2.0));
}

TEST_CASE("time-domain extinction in the quasi-steady window") {
    // Omega_c = 1e-2 Gamma31: the mean-field flux at the window center
    // t_c = 1/sqrt(Gamma31 Omega_c) = 10 must drop below 1e-4 of the peak.
    const ObeParams p{0.01, 1.0, 1.0, 1.0};
    const FluxTrace f = flux_trace(p, 20.0);
    const double peak = *std::max_element(f.full.begin(), f.full.end());
    REQUIRE(peak == Approx(p.beta * p.beta).epsilon(0.05));
    REQUIRE(at_time(f, f.coherent, 10.0) < 1e-4 * peak);

    // the full flux also extinguishes once the drive is weak enough for the
    // saturation floor ~ rho33 * Gamma32 * t to sit below threshold
    const ObeParams weak{0.001, 1.0, 1.0, 1.0};
    const FluxTrace fw = flux_trace(weak, 20.0);
    const double peak_w = *std::max_element(fw.full.begin(), fw.full.end());
    REQUIRE(at_time(fw, fw.full, 10.0) < 1e-4 * peak_w);
}

TEST_CASE("unequal rates: no extinction; two-level limit keeps |beta|^2") {
    const ObeParams p{0.01, 1.0, 0.0, 1.0}; // Gamma32 = 0
    const FluxTrace f = flux_trace(p, 20.0);
    const double center = at_time(f, f.coherent, 10.0);
    REQUIRE(center == Approx(p.beta * p.beta).epsilon(0.05));
    // oracle coherence reaches the closed-form value
    const ScenarioModel m = build_coherent_drive_model(p);
    IntegratorConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 20.0;
    const MasterTrace trace = integrate_master(m, cfg, 0.05);
    const Amplitude s13_end = trace.linear.at("sigma13").back();
    REQUIRE(std::abs(s13_end - quasi_steady_coherence(p)) <
            0.01 * std::abs(quasi_steady_coherence(p)));
}

TEST_CASE("time-domain flux matches |mean_output_field|^2 to 1% in the window") {
    for (double g32 : {0.0, 3.0}) {
        const ObeParams p{0.001, 1.0, g32, 1.0};
        const FluxTrace f = flux_trace(p, 25.0);
        const double expected = std::norm(mean_output_field(p));
        const double got = at_time(f, f.coherent, 20.0);
        REQUIRE(std::abs(got - expected) <= 0.01 * std::max(expected, std::norm(p.beta)));
    }
}

TEST_CASE("eta = 0: the atom is invisible, flux stays |beta|^2") {
    const ObeParams p{0.01, 1.0, 1.0, 0.0};
    const FluxTrace f = flux_trace(p, 5.0);
    for (double v : f.full) REQUIRE(v == Approx(p.beta * p.beta).margin(1e-12));
}

TEST_CASE("coherent-drive model: MCWF agrees with the oracle") {
    const ObeParams p{0.05, 1.0, 1.0, 1.0}; // stronger drive so jumps happen
    const ScenarioModel m = build_coherent_drive_model(p);
    REQUIRE(!m.expects_steady_state);
    IntegratorConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 30.0;
    const MasterTrace trace = integrate_master(m, cfg);
    const auto res = run_ensemble(m, cfg, 400, 909);
    for (const auto& [name, ms] : res.observables) {
        const double tol = 3.0 * std::max(ms.second, 1e-9);
        INFO(name);
        REQUIRE(std::abs(ms.first - final_value(trace, name)) <= tol);
    }
}

TEST_CASE("obe parameter validation") {
    ObeParams p;
    p.eta = -0.1;
    REQUIRE_THROWS_AS(p.validate(), config_error);
    p = ObeParams{};
    p.gamma31 = -1.0;
    REQUIRE_THROWS_AS(p.validate(), config_error);
}
