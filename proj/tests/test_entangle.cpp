#include <catch2/catch.hpp>

#include <cmath>

#include "cascade/lindblad.hpp"
#include "cascade/mcwf.hpp"
#include "cascade/model.hpp"

using namespace cascade;

TEST_CASE("entanglement model structure") {
    CascadeParams p;
    p.eta = 0.3;
    const ScenarioModel m = build_entanglement_model(p);
    REQUIRE(m.space.dim() == 20);
    REQUIRE(norm2(m.initial_state) == Approx(1.0));
    REQUIRE(m.collapse_ops.size() == 5); // C1+-, C2+-, joint C3

    for (const auto& [name, proj] : m.projectors) {
        REQUIRE(is_hermitian(proj.mat, 1e-12));
        REQUIRE((proj.mat * proj.mat - proj.mat).cwiseAbs().maxCoeff() < 1e-12);
    }
    // bell subspace sits inside the success subspace
    const Matrix bs = m.projectors.at("bell").mat * m.projectors.at("success").mat;
    REQUIRE((bs - m.projectors.at("bell").mat).cwiseAbs().maxCoeff() < 1e-12);

    // reconstruction: model H_eff has the per-branch unidirectional terms
    const auto& sp = m.space;
    const Operator heff = model_h_eff(m, 0.0);
    const double g = std::sqrt((p.gamma31_S / 2.0) * p.gamma31_T * p.eta);
    for (const char* pol : {"+", "-"}) {
        const int from = sp.pack({sp.level_index(0, "3"),
                                  sp.level_index(1, "1")});
        const int to = sp.pack({sp.level_index(0, std::string("1") + pol),
                                sp.level_index(1, std::string("3") + pol)});
        REQUIRE(std::abs(heff.mat(to, from) - Amplitude{0.0, -g}) < 1e-12);
        REQUIRE(std::abs(heff.mat(from, to)) == 0.0); // unidirectional per branch
    }
}

TEST_CASE("eta = 1, equal rates: conditional state is the Bell state") {
    CascadeParams p; // eta = 1
    const ScenarioModel m = build_entanglement_model(p);
    IntegratorConfig cfg;
    cfg.dt = 5e-3;
    const MasterTrace trace = integrate_master(m, cfg);

    const double success = final_value(trace, "success");
    const double bell = final_value(trace, "bell");
    // per-branch interference is identical to the basic scenario, so the
    // success probability reproduces the frozen basic-model value
    REQUIRE(success == Approx(0.97723603).margin(5e-4));
    REQUIRE(bell / success == Approx(1.0).margin(1e-6));
    REQUIRE(trace.max_trace_drift <= 1e-8);
    REQUIRE(trace.min_eigenvalue >= -1e-8);
}

TEST_CASE("success scales as eta x absorption; eta_S is a classical factor") {
    CascadeParams p;
    p.eta = 0.3;
    p.eta_S = 0.3;
    const ScenarioModel m = build_entanglement_model(p);
    IntegratorConfig cfg;
    cfg.dt = 5e-3;
    const MasterTrace trace = integrate_master(m, cfg);
    const double success = final_value(trace, "success");
    REQUIRE(success == Approx(0.3 * 0.97723603).margin(1e-3));
    const double total = p.eta_S * success;
    REQUIRE(total > 0.07);
    REQUIRE(total < 0.13);
    // conditional fidelity survives eta < 1 (failures fall outside "success")
    REQUIRE(final_value(trace, "bell") / success == Approx(1.0).margin(1e-6));
}

TEST_CASE("eta = 0: no absorption, no entanglement") {
    CascadeParams p;
    p.eta = 0.0;
    const ScenarioModel m = build_entanglement_model(p);
    IntegratorConfig cfg;
    cfg.dt = 5e-3;
    const MasterTrace trace = integrate_master(m, cfg);
    REQUIRE(final_value(trace, "success") <= 1e-12);
}

TEST_CASE("entanglement MCWF agrees with the oracle") {
    CascadeParams p;
    p.eta = 0.5;
    const ScenarioModel m = build_entanglement_model(p);
    IntegratorConfig cfg;
    cfg.dt = 5e-3;
    const MasterTrace trace = integrate_master(m, cfg);
    const auto res = run_ensemble(m, cfg, 150, 555);
    for (const auto& [name, ms] : res.observables) {
        const double tol = 3.0 * std::max(ms.second, 1e-9);
        INFO(name);
        REQUIRE(std::abs(ms.first - final_value(trace, name)) <= tol);
    }
    // a successful trajectory's final state IS the Bell state
    const auto rec_res = run_ensemble(m, cfg, 40, 808, 1, /*keep_records=*/true);
    const StateVector bell_ket = normalize(add(basis_state(m.space, {"1+", "2+"}),
                                               basis_state(m.space, {"1-", "2-"})));
    for (const auto& rec : *rec_res.records) {
        const double succ =
            std::real(expectation(rec.final_state, m.projectors.at("success")));
        if (succ > 0.5)
            REQUIRE(std::norm(bell_ket.amp.dot(rec.final_state.amp)) ==
                    Approx(1.0).margin(1e-9));
    }
}
