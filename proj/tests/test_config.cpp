#include <catch2/catch.hpp>

#include "cascade/config.hpp"

using namespace cascade;

TEST_CASE("empty object gives the canonical defaults") {
    const RunConfig cfg = validate_config("{}");
    REQUIRE(cfg.scenario == Scenario::lambda_basic);
    REQUIRE(cfg.engine == Engine::both);
    REQUIRE(cfg.params.gamma31_T == 1.0);
    REQUIRE(cfg.params.gamma31_S == 10.0);
    REQUIRE(cfg.params.gamma30_S == 0.0);
    REQUIRE(cfg.params.gamma32_T == 1.0);
    REQUIRE(cfg.params.gamma21_T == 0.0);
    REQUIRE(cfg.params.eta == 1.0);
    REQUIRE(cfg.params.pulse.omega0 == 1.0);
    REQUIRE(cfg.params.pulse.tau == 10.0);
    REQUIRE(cfg.params.pulse.t0 == 20.0);
    REQUIRE(cfg.integrator.dt == 1e-3);
    REQUIRE(cfg.integrator.t_end == 100.0);
    REQUIRE(cfg.ensemble.n_traj == 10000);
    REQUIRE(!cfg.sweep.has_value());
}

TEST_CASE("schema violations carry key paths") {
    using Catch::Matchers::Contains;
    REQUIRE_THROWS_WITH(validate_config(R"({"params": {"gamma31_S": -2}})"),
                        Contains("gamma31_S"));
    REQUIRE_THROWS_WITH(validate_config(R"({"params": {"gamma31_Z": 1}})"),
                        Contains("params.gamma31_Z"));
    REQUIRE_THROWS_WITH(validate_config(R"({"bogus": 1})"), Contains("bogus"));
    REQUIRE_THROWS_WITH(validate_config(R"({"params": {"pulse": {"width": 1}}})"),
                        Contains("params.pulse.width"));
    REQUIRE_THROWS_WITH(
        validate_config(R"({"sweep": {"path": "params.nope", "values": [1]}})"),
        Contains("params.nope"));
    REQUIRE_THROWS_AS(validate_config("not json"), config_error);
    REQUIRE_THROWS_AS(validate_config(R"({"params": {"eta": 1.5}})"), config_error);
    REQUIRE_THROWS_AS(validate_config(R"({"integrator": {"dt": 0}})"), config_error);
    REQUIRE_THROWS_AS(validate_config(R"({"ensemble": {"n_traj": 0}})"), config_error);
    REQUIRE_THROWS_AS(
        validate_config(R"({"sweep": {"path": "params.eta", "values": []}})"),
        config_error);
}

TEST_CASE("config echo round-trips to an equal RunConfig") {
    const std::string text = R"({
        "scenario": "lambda_basic",
        "engine": "oracle",
        "params": {"gamma32_T": 0.5, "eta": 0.75, "pulse": {"omega0": 0.3}},
        "integrator": {"dt": 0.002, "t_end": 60.0},
        "ensemble": {"n_traj": 128, "master_seed": 99},
        "sweep": {"path": "params.eta", "values": [0.0, 0.5, 1.0]},
        "outputs": {"csv": "a.csv", "json": "b.json", "svg": "c.svg"}
    })";
    const RunConfig cfg = validate_config(text);
    const RunConfig round = validate_config(config_to_json(cfg).dump());
    REQUIRE(cfg == round);
}

TEST_CASE("jitter scenario defaults gamma30_S to gamma31_S") {
    const RunConfig cfg = validate_config(R"({"scenario": "lambda_jitter"})");
    REQUIRE(cfg.params.gamma30_S == cfg.params.gamma31_S);
    const RunConfig explicit_cfg = validate_config(
        R"({"scenario": "lambda_jitter", "params": {"gamma30_S": 3.5}})");
    REQUIRE(explicit_cfg.params.gamma30_S == 3.5);
    REQUIRE_THROWS_AS(
        validate_config(
            R"({"scenario": "lambda_jitter", "sweep": {"path": "params.eta", "values": [1]}})"),
        config_error);
}

TEST_CASE("obe scenario picks its parameters from the params block") {
    const RunConfig cfg = validate_config(
        R"({"scenario": "coherent_obe", "params": {"beta": 0.02, "gamma32_T": 2.0, "eta": 0.5}})");
    const ObeParams p = cfg.obe_params();
    REQUIRE(p.beta == 0.02);
    REQUIRE(p.gamma31 == 1.0);
    REQUIRE(p.gamma32 == 2.0);
    REQUIRE(p.eta == 0.5);
}

TEST_CASE("enum parsing") {
    REQUIRE(scenario_from_string("polarization_entanglement") ==
            Scenario::polarization_entanglement);
    REQUIRE_THROWS_AS(scenario_from_string("nope"), config_error);
    REQUIRE(engine_from_string("mcwf") == Engine::mcwf);
    REQUIRE_THROWS_AS(engine_from_string("nope"), config_error);
    REQUIRE_THROWS_AS(validate_config(R"({"scenario": "x"})"), config_error);
    REQUIRE_THROWS_AS(validate_config(R"({"engine": 3})"), config_error);
}
