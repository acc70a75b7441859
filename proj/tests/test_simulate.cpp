#include "branchtarget/errors.hpp"
#include "branchtarget/scenario.hpp"
#include "branchtarget/simulate.hpp"
#include "branchtarget/target.hpp"

#include <doctest.h>

#include <cmath>
#include <span>
#include <vector>

using namespace bt;

namespace {

// deterministic single-type model: constant drifts, no noise
CoefficientModel flat_model(double lam, double lam_y) {
    CoefficientModel m;
    m.controls = {0.0};
    m.drift = [lam](std::span<const double>, double, std::span<double> out) { out[0] = lam; };
    m.diffusion = [](std::span<const double>, double, std::span<double> out) { out[0] = 0.0; };
    m.target_drift = [lam_y](std::span<const double>, double, double) { return lam_y; };
    m.target_diffusion = [](std::span<const double>, double, std::span<double> out) {
        out[0] = 0.0;
    };
    return m;
}

OffspringLaw no_branching() { return OffspringLaw{0.0, {{1u, 1.0}}}; }

PointMeasure root_state(double x, double y) {
    const double pt[] = {x, y};
    return singleton(2, Label::root(), pt);
}

Scenario desk() {
    FintechParams p;
    return fintech_scenario(p, OffspringLaw{1.0, {{0u, 0.5}, {2u, 0.5}}});
}

} // namespace

TEST_SUITE("simulate") {

    TEST_CASE("constant coefficients integrate exactly without noise") {
        SimConfig cfg;
        cfg.dt = 0.25;
        const PopulationPath path =
            simulate(0.0, root_state(0.5, 2.0), flat_model(0.3, 0.1), no_branching(),
                     ConstantControl(0.0), cfg);
        CHECK(path.events.empty());
        REQUIRE(path.terminal().size() == 1);
        const auto& pt = path.terminal().entries()[0].point;
        CHECK(pt[0] == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(pt[1] == doctest::Approx(2.1).epsilon(1e-12));
        CHECK(path.times.front() == 0.0);
        CHECK(path.times.back() == 1.0);
    }

    TEST_CASE("identical configurations reproduce bit-identical paths") {
        const Scenario s = desk();
        SimConfig cfg;
        cfg.dt = 1.0 / 64.0;
        cfg.seed = 11;
        cfg.path_index = 3;
        cfg.record = true;
        const ConstantControl ctl(0.5);
        const PointMeasure init = root_state(0.0, 0.0);

        const PopulationPath a = simulate(0.0, init, s.model, s.law, ctl, cfg);
        const PopulationPath b = simulate(0.0, init, s.model, s.law, ctl, cfg);
        CHECK(a.times == b.times);
        CHECK(a.states == b.states);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t i = 0; i < a.events.size(); ++i) {
            CHECK(a.events[i].time == b.events[i].time);
            CHECK(a.events[i].parent == b.events[i].parent);
            CHECK(a.events[i].offspring == b.events[i].offspring);
        }

        SimConfig other = cfg;
        other.path_index = 4;
        const PopulationPath c = simulate(0.0, init, s.model, s.law, ctl, other);
        CHECK(c.terminal().entries() != a.terminal().entries());
    }

    TEST_CASE("coupled level shift: higher start stays higher at every stop") {
        const Scenario s = desk();
        const ConstantControl ctl(0.5);
        for (std::uint64_t p = 0; p < 50; ++p) {
            SimConfig cfg;
            cfg.dt = 1.0 / 64.0;
            cfg.seed = 20260817;
            cfg.path_index = p;
            cfg.record = true;
            const PopulationPath lo = simulate(0.0, root_state(0.0, 0.0), s.model, s.law, ctl, cfg);
            const PopulationPath hi = simulate(0.0, root_state(0.0, 0.1), s.model, s.law, ctl, cfg);
            REQUIRE(lo.times == hi.times);
            for (std::size_t i = 0; i < lo.states.size(); ++i) {
                const auto& el = lo.states[i].entries();
                const auto& eh = hi.states[i].entries();
                REQUIRE(el.size() == eh.size());
                for (std::size_t j = 0; j < el.size(); ++j) {
                    CHECK(el[j].label == eh[j].label);
                    CHECK(el[j].point[0] == eh[j].point[0]); // x untouched by the shift
                    CHECK(eh[j].point[1] >= el[j].point[1]);
                }
            }
        }
    }

    TEST_CASE("event stream replays onto the genealogy") {
        const Scenario s = desk();
        OffspringLaw busy = s.law;
        busy.gamma = 2.0; // more events per path
        SimConfig cfg;
        cfg.dt = 1.0 / 32.0;
        cfg.seed = 5;
        cfg.path_index = 1;
        const PopulationPath path =
            simulate(0.0, root_state(0.0, 0.0), s.model, busy, ConstantControl(0.3), cfg);

        PointMeasure replay(2);
        replay.insert(Label::root(), {0.0, 0.0});
        for (const auto& ev : path.events) replay.branch(ev.parent, ev.offspring);
        REQUIRE(replay.size() == path.terminal().size());
        const auto& got = path.terminal().entries();
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(replay.entries()[i].label == got[i].label);
    }

    TEST_CASE("an extinct or empty population still reaches the horizon") {
        const Scenario s = desk();
        const PopulationPath path = simulate(0.0, PointMeasure(2), s.model, s.law,
                                             ConstantControl(0.0), SimConfig{});
        CHECK(path.terminal().empty());
        CHECK(path.times.back() == 1.0);

        // all lines die: p_0 = 1
        const OffspringLaw dying{4.0, {{0u, 1.0}}};
        const PopulationPath gone = simulate(0.0, root_state(0.0, 0.0), s.model, dying,
                                             ConstantControl(0.0), SimConfig{});
        CHECK(gone.terminal().empty());
        CHECK(gone.events.size() == 1);
        CHECK(gone.peak_population == 1);
    }

    TEST_CASE("population cap turns runaway branching into an error") {
        const Scenario s = desk();
        const OffspringLaw tripling{8.0, {{3u, 1.0}}};
        SimConfig cfg;
        cfg.population_cap = 8;
        CHECK_THROWS_AS(
            simulate(0.0, root_state(0.0, 0.0), s.model, tripling, ConstantControl(0.0), cfg),
            ExplosionError);
    }

    TEST_CASE("snapshots are recorded at exact times") {
        const Scenario s = desk();
        SimConfig cfg;
        cfg.dt = 1.0 / 3.0; // grid misses 0.25 on purpose
        cfg.snapshot_times = {0.25};
        cfg.seed = 2;
        const PopulationPath path =
            simulate(0.0, root_state(0.0, 0.0), s.model, s.law, ConstantControl(0.0), cfg);
        CHECK(path.state_at(0.25) != nullptr);
        CHECK(path.state_at(0.30) == nullptr);
    }

    TEST_CASE("peak population matches the recorded states") {
        const Scenario s = desk();
        OffspringLaw busy = s.law;
        busy.gamma = 3.0;
        SimConfig cfg;
        cfg.dt = 1.0 / 64.0;
        cfg.seed = 7;
        cfg.record = true;
        const PopulationPath path =
            simulate(0.0, root_state(0.0, 0.0), s.model, busy, ConstantControl(0.0), cfg);
        std::size_t seen = 0;
        for (const auto& st : path.states) seen = std::max(seen, st.size());
        CHECK(path.peak_population == seen);
    }

    TEST_CASE("restart continues to the configured horizon from the stored state") {
        const Scenario s = desk();
        const ConstantControl ctl(0.5);
        SimConfig head_cfg;
        head_cfg.dt = 1.0 / 64.0;
        head_cfg.seed = 3;
        head_cfg.horizon = 0.5;
        const PopulationPath head =
            simulate(0.0, root_state(0.0, 0.0), s.model, s.law, ctl, head_cfg);

        SimConfig tail_cfg = head_cfg;
        tail_cfg.horizon = 1.0;
        tail_cfg.path_index = 99; // fresh continuation randomness
        const PopulationPath tail = restart(head, 0.5, s.model, s.law, ctl, tail_cfg);
        CHECK(tail.t0 == 0.5);
        CHECK(tail.times.front() == 0.5);
        CHECK(tail.times.back() == 1.0);
        CHECK(tail.states.front() == head.terminal());

        CHECK_THROWS_AS(restart(head, 0.37, s.model, s.law, ctl, tail_cfg), InputError);
    }

    TEST_CASE("mean-reverting drift: sample mean tracks the scheme and the flow") {
        // dX = -X dt + 0.3 dW from 1.0; the Euler mean is exactly (1 - h)^(T/h)
        CoefficientModel m = flat_model(0.0, 0.0);
        m.drift = [](std::span<const double> x, double, std::span<double> out) {
            out[0] = -x[0];
        };
        m.diffusion = [](std::span<const double>, double, std::span<double> out) {
            out[0] = 0.3;
        };
        SimConfig cfg;
        cfg.dt = 1.0 / 64.0;
        cfg.seed = 31;
        const std::size_t n = 20000;
        double sum = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            cfg.path_index = p;
            const PopulationPath path =
                simulate(0.0, root_state(1.0, 0.0), m, no_branching(), ConstantControl(0.0), cfg);
            sum += path.terminal().entries()[0].point[0];
        }
        const double mean = sum / static_cast<double>(n);
        CHECK(std::abs(mean - 0.3649865242439074) < 0.006); // scheme mean +- 4 SE
        CHECK(std::abs(mean - std::exp(-1.0)) < 0.012);     // flow mean +- bias + noise
    }

    TEST_CASE("growth report honours the exponential bound") {
        const Scenario s = desk();
        SimConfig cfg;
        cfg.dt = 1.0 / 32.0;
        cfg.seed = 17;
        const GrowthReport rep = population_growth_report(
            0.0, root_state(0.0, 0.0), s.model, s.law, ConstantControl(0.0), cfg, 500, 1);
        CHECK(rep.n_paths == 500);
        CHECK(rep.bound == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
        CHECK(rep.mean_peak >= 1.0);
        CHECK(rep.within_bound);
    }

} // TEST_SUITE
