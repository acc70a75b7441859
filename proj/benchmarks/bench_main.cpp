#include "branchtarget/hjb.hpp"
#include "branchtarget/rng.hpp"
#include "branchtarget/scenario.hpp"
#include "branchtarget/simulate.hpp"
#include "branchtarget/target.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

namespace {

bt::Scenario desk() {
    bt::FintechParams p;
    return bt::fintech_scenario(p, bt::OffspringLaw{1.0, {{0u, 0.5}, {2u, 0.5}}});
}

bt::PointMeasure root_state(double x, double y) {
    const double pt[] = {x, y};
    return bt::singleton(2, bt::Label::root(), pt);
}

void BM_simulate_path(benchmark::State& state) {
    const bt::Scenario s = desk();
    const bt::ConstantControl ctl(0.5);
    const bt::PointMeasure init = root_state(0.0, 0.0);
    bt::SimConfig cfg;
    cfg.dt = 1.0 / static_cast<double>(state.range(0));
    std::uint64_t path = 0;
    for (auto _ : state) {
        cfg.path_index = path++;
        benchmark::DoNotOptimize(bt::simulate(0.0, init, s.model, s.law, ctl, cfg));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_simulate_path)->Arg(64)->Arg(256);

void BM_facelift(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    bt::CounterRng rng(1, 1);
    std::vector<double> slice(n);
    for (auto& v : slice) v = rng.uniform01();
    const double dx = 9.0 / static_cast<double>(n - 1);
    for (auto _ : state) benchmark::DoNotOptimize(bt::facelift(slice, dx, 0.0, 1.0));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_facelift)->Arg(201)->Arg(801);

void BM_hamiltonian_sweep(benchmark::State& state) {
    const bt::Scenario s = desk();
    for (auto _ : state) {
        double acc = 0.0;
        for (int j = 0; j < 201; ++j) {
            const double p = -0.2 + 1.4 * j / 200.0;
            acc += bt::hamiltonian(s.model, -6.0 + 0.045 * j, 0.0, p, 0.1, 1e-3);
        }
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 201);
}
BENCHMARK(BM_hamiltonian_sweep);

void BM_solve_vi(benchmark::State& state) {
    const bt::Scenario s = desk();
    bt::GridSpec g;
    g.nx = static_cast<int>(state.range(0));
    g.tree_depth = 2;
    for (auto _ : state)
        benchmark::DoNotOptimize(bt::solve_vi(s.model, s.law, s.target, g, s.slope_cone));
}
BENCHMARK(BM_solve_vi)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_estimate_value(benchmark::State& state) {
    const bt::Scenario s = desk();
    bt::ControlFamily controls;
    for (const double a : {0.0, 0.5, 1.0}) controls.push_back(std::make_shared<bt::ConstantControl>(a));
    const double x0[] = {0.0};
    const bt::PointMeasure init = bt::singleton(1, bt::Label::root(), x0);
    bt::BisectionSpec spec;
    spec.y_lo = -2.58;
    spec.y_hi = 0.175;
    spec.n_paths = static_cast<std::size_t>(state.range(0));
    bt::SimConfig cfg;
    cfg.dt = 1.0 / 64.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            bt::estimate_value(0.0, init, s.model, s.law, s.target, controls, spec, cfg));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_estimate_value)->Arg(200)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
