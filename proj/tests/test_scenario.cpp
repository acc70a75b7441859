#include "branchtarget/errors.hpp"
#include "branchtarget/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

using namespace bt;

TEST_SUITE("scenario") {

    TEST_CASE("the shipped desk file loads with its closed forms") {
        const Scenario s = load_scenario(BT_SCENARIO_FILE);
        CHECK(s.kind == "fintech");
        CHECK(s.source_path == std::string(BT_SCENARIO_FILE));
        CHECK_FALSE(s.source_digest.empty());
        REQUIRE(s.fintech.has_value());
        CHECK(s.model.controls.size() == 101);
        CHECK(s.model.controls.front() == 0.0);
        CHECK(s.model.controls.back() == 1.0);
        CHECK(s.target.horizon == 1.0);
        REQUIRE(s.slope_cone.has_value());
        CHECK(s.slope_cone->first == 0.0);
        CHECK(s.slope_cone->second == 1.0);
        CHECK_FALSE(s.model.target_drift_in_y);

        const FintechParams& p = *s.fintech;
        CHECK(p.strike(Label::root()) == 1.0);
        CHECK(p.strike(Label::parse("1")) == 0.5);      // strikes halve per digit sum
        CHECK(p.strike(Label::parse("1.0")) == 0.5);
        CHECK(p.strike(Label::parse("2.3")) == 0.03125);
        CHECK(p.effective_strike_bound() == 1.0);
        CHECK(p.strike_bound_excess() == 0.0);

        CHECK(p.lower_bound(0.0) == doctest::Approx(-2.4825850929940456).epsilon(1e-12));
        CHECK(p.upper_bound(0.0) == doctest::Approx(0.07531017980432493).epsilon(1e-12));
        CHECK(p.lower_bound(1.0) == doctest::Approx(std::log(0.1)).epsilon(1e-12));

        const double x0[] = {0.0};
        CHECK(s.target.payoff(Label::root(), x0) ==
              doctest::Approx(std::log(0.1)).epsilon(1e-12)); // at the money
        // a child index past the bound voids the claim
        CHECK(s.target.payoff(Label::parse("8"), x0) == 0.0);
        CHECK(s.target.payoff(Label::parse("0.9.1"), x0) == 0.0);

        CHECK(s.law.gamma == 1.0);
        CHECK(s.law.mean() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.law.max_children() == 2);
        CHECK(s.law.child_index_bound() == 3);
    }

    TEST_CASE("strike table overrides and the declared bound") {
        const std::string text = R"({"kind":"fintech","T":1.0,"gamma":1.0,
            "offspring":[[0,0.5],[2,0.5]],"strike0":1.0,
            "strikes":{"0":0.8,"1.1":2.5},"strike_bound":1.0})";
        const Scenario s = scenario_from_json_text(text);
        REQUIRE(s.fintech.has_value());
        CHECK(s.fintech->strike(Label::parse("0")) == 0.8);
        CHECK(s.fintech->strike(Label::parse("1.1")) == 2.5);
        CHECK(s.fintech->strike(Label::parse("1")) == 0.5); // untouched ladder entry
        CHECK(s.fintech->effective_strike_bound() == 1.0);  // the declaration wins
        // the table pokes above the declared bound: flagged, not fatal
        CHECK(s.fintech->strike_bound_excess() == doctest::Approx(1.5).epsilon(1e-12));
    }

    TEST_CASE("custom scenarios honour the grid and cone") {
        const std::string text = R"({"kind":"custom","T":0.5,"gamma":2.0,
            "offspring":[[0,0.25],[1,0.5],[3,0.25]],
            "control_grid":[-1.0,0.0,2.0],
            "coefficients":{"drift":{"cx":-1.0},"diffusion":{"c0":0.3},
                "target_drift":{"c0":0.1,"ca":0.2},"target_diffusion":{"ca":0.3}},
            "payoff":{"kind":"call_log","strike_log":0.2,"slope":0.7},
            "slope_cone":[-0.5,1.5]})";
        const Scenario s = scenario_from_json_text(text);
        CHECK(s.kind == "custom");
        CHECK_FALSE(s.fintech.has_value());
        CHECK(s.model.controls == std::vector<double>{-1.0, 0.0, 2.0});
        CHECK(s.target.horizon == 0.5);
        REQUIRE(s.slope_cone.has_value());
        CHECK(s.slope_cone->first == -0.5);
        CHECK(s.slope_cone->second == 1.5);
        CHECK(s.law.max_children() == 3);
        CHECK(s.law.mean() == doctest::Approx(0.25 * 0 + 0.5 * 1 + 0.25 * 3).epsilon(1e-15));

        const double at[] = {1.0};
        CHECK(s.target.payoff(Label::root(), at) == doctest::Approx(0.7 * 0.8).epsilon(1e-12));
        const double below[] = {-1.0};
        CHECK(s.target.payoff(Label::root(), below) == 0.0);

        // coefficient wiring: drift reads x, target drift reads the control
        double out[1];
        s.model.drift(at, 0.0, out);
        CHECK(out[0] == -1.0);
        CHECK(s.model.target_drift(at, 99.0, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
        s.model.target_diffusion(at, 2.0, out);
        CHECK(out[0] == doctest::Approx(0.6).epsilon(1e-12));
        CHECK_FALSE(s.model.target_drift_in_y);

        const std::string with_y = R"({"kind":"custom","T":1.0,"gamma":0.0,
            "offspring":[[1,1.0]],
            "coefficients":{"target_drift":{"cy":0.5}},
            "payoff":{"kind":"zero"}})";
        CHECK(scenario_from_json_text(with_y).model.target_drift_in_y);
    }

    TEST_CASE("malformed scenarios are input errors") {
        CHECK_THROWS_AS(scenario_from_json_text("not json at all"), InputError);
        CHECK_THROWS_AS(scenario_from_json_text(R"({"kind":"exotic"})"), InputError);
        CHECK_THROWS_AS(scenario_from_json_text(R"({"T":1.0})"), InputError);
        // offspring problems: missing, ragged entry, bad mass, negative rate
        const std::string base = R"({"kind":"fintech","T":1.0)";
        CHECK_THROWS_AS(scenario_from_json_text(base + "}"), InputError);
        CHECK_THROWS_AS(
            scenario_from_json_text(base + R"(,"gamma":1.0,"offspring":[[2]]})"), InputError);
        CHECK_THROWS_AS(
            scenario_from_json_text(base + R"(,"gamma":1.0,"offspring":[[0,0.5],[2,0.6]]})"),
            InputError);
        CHECK_THROWS_AS(
            scenario_from_json_text(base + R"(,"gamma":1.0,"offspring":[[0,0.5],[0,0.5]]})"),
            InputError);
        CHECK_THROWS_AS(
            scenario_from_json_text(base + R"(,"gamma":-1.0,"offspring":[[1,1.0]]})"),
            InputError);
        CHECK_THROWS_AS(
            scenario_from_json_text(base + R"(,"T":0.0,"gamma":1.0,"offspring":[[1,1.0]]})"),
            InputError);
        // unknown payoff kind in a custom scenario
        CHECK_THROWS_AS(scenario_from_json_text(
                            R"({"kind":"custom","T":1.0,"gamma":1.0,"offspring":[[1,1.0]],
                                "coefficients":{},"payoff":{"kind":"barrier"}})"),
                        InputError);
    }

    TEST_CASE("parameter validation") {
        FintechParams p;
        p.kappa = 0.0;
        CHECK_THROWS_AS(p.validate(), InputError);
        p = FintechParams{};
        p.n_controls = 1;
        CHECK_THROWS_AS(p.validate(), InputError);
        p = FintechParams{};
        p.strike_table[Label::parse("2")] = -1.0;
        CHECK_THROWS_AS(p.validate(), InputError);
        p = FintechParams{};
        CHECK_NOTHROW(p.validate());

        CoefficientModel m;
        CHECK_THROWS_AS(m.validate(), InputError); // no controls, no callbacks
        m.controls = {0.3, 0.1};
        m.drift = m.diffusion = [](std::span<const double>, double, std::span<double> out) {
            out[0] = 0.0;
        };
        m.target_drift = [](std::span<const double>, double, double) { return 0.0; };
        m.target_diffusion = [](std::span<const double>, double, std::span<double> out) {
            out[0] = 0.0;
        };
        CHECK_THROWS_AS(m.validate(), InputError); // descending grid
        m.controls = {0.1, 0.3};
        CHECK_NOTHROW(m.validate());

        OffspringLaw law{1.0, {{0u, 0.5}, {2u, 0.5}}};
        CHECK_NOTHROW(law.validate());
        law.pmf = {};
        CHECK_THROWS_AS(law.validate(), InputError);
    }

    TEST_CASE("digests identify the bytes, not the path") {
        const std::string a = R"({"kind":"fintech","T":1.0,"gamma":1.0,"offspring":[[1,1.0]]})";
        const std::string b = R"({"kind":"fintech","T":2.0,"gamma":1.0,"offspring":[[1,1.0]]})";
        CHECK(scenario_from_json_text(a).source_digest ==
              scenario_from_json_text(a).source_digest);
        CHECK(scenario_from_json_text(a).source_digest !=
              scenario_from_json_text(b).source_digest);
        CHECK(scenario_from_json_text(a).source_path.empty());
    }

} // TEST_SUITE
