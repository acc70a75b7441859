#include "branchtarget/verify.hpp"

#include "branchtarget/errors.hpp"
#include "branchtarget/hjb.hpp"
#include "branchtarget/parallel.hpp"
#include "branchtarget/report.hpp"
#include "branchtarget/rng.hpp"
#include "branchtarget/simulate.hpp"
#include "branchtarget/target.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <mutex>
#include <vector>

namespace bt {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

struct Ctx {
    const Scenario& scn;
    VerifyOptions opts;
    int threads = 1;
    double x0 = 0.0;
    GridSpec grid; // the reference solver grid
    std::shared_ptr<const ValueSurface> surface; // lazily solved on `grid`

    const ValueSurface& solved() {
        if (!surface)
            surface = std::make_shared<ValueSurface>(
                solve_vi(scn.model, scn.law, scn.target, grid, scn.slope_cone));
        return *surface;
    }
};

using CheckFn = std::function<void(Ctx&, CheckResult&)>;

CheckResult run_one(Ctx& ctx, const std::string& name, double budget_seconds,
                    const CheckFn& fn) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
        fn(ctx, r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0.0 && r.seconds > budget_seconds) {
        r.pass = false;
        r.detail += " [over " + num(budget_seconds) + " s budget]";
    }
    return r;
}

CheckResult skipped(const std::string& name, const std::string& why) {
    CheckResult r;
    r.name = name;
    r.ran = false;
    r.pass = true;
    r.detail = why;
    return r;
}

PointMeasure root_at(double x0) {
    const std::vector<double> p{x0};
    return singleton(1, Label::root(), p);
}

// ---- checks ----------------------------------------------------------

void check_scenario_sanity(Ctx& c, CheckResult& r) {
    c.scn.model.validate();
    c.scn.law.validate();
    if (c.scn.fintech) {
        c.scn.fintech->validate();
        const double excess = c.scn.fintech->strike_bound_excess();
        r.pass = excess <= 1e-12;
        r.detail = "strike excess over declared bound = " + num(excess) +
                   ", bound = " + num(c.scn.fintech->effective_strike_bound());
    } else {
        r.pass = true;
        r.detail = "model and offspring law validated";
    }
}

void check_population_growth(Ctx& c, CheckResult& r) {
    const std::size_t n_paths = 10000;
    SimConfig base;
    base.dt = 1.0 / 64.0;
    base.seed = c.opts.seed;
    const ConstantControl ctl(c.scn.model.controls.front());
    const PointMeasure init = with_level(root_at(c.x0), 0.0);
    const GrowthReport g = population_growth_report(0.0, init, c.scn.model, c.scn.law, ctl,
                                                    base, n_paths, c.threads);
    r.pass = g.within_bound;
    r.detail = "mean sup |V| = " + num(g.mean_peak) + " (se " + num(g.se_peak) +
               ", max " + num(g.max_peak) + ") vs bound " + num(g.bound);
}

void check_crn_monotonicity(Ctx& c, CheckResult& r) {
    const std::size_t pairs = c.opts.level == "fast" ? 100 : 1000;
    const double bump = 0.1;
    const ConstantControl ctl(c.scn.model.controls[c.scn.model.controls.size() / 2]);
    const PointMeasure lo = with_level(root_at(c.x0), 0.0);
    const PointMeasure hi = with_level(root_at(c.x0), bump);
    std::atomic<std::size_t> violations{0}, compared{0};
    parallel_for(pairs, c.threads, [&](std::size_t p) {
        SimConfig cfg;
        cfg.dt = 1.0 / 256.0;
        cfg.seed = c.opts.seed;
        cfg.path_index = p;
        cfg.record = true;
        cfg.horizon = c.scn.target.horizon;
        const PopulationPath a = simulate(0.0, lo, c.scn.model, c.scn.law, ctl, cfg);
        const PopulationPath b = simulate(0.0, hi, c.scn.model, c.scn.law, ctl, cfg);
        if (a.times.size() != b.times.size()) {
            violations.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        const std::size_t yi = a.states.front().dim() - 1;
        for (std::size_t k = 0; k < a.states.size(); ++k) {
            const auto& ea = a.states[k].entries();
            const auto& eb = b.states[k].entries();
            if (ea.size() != eb.size()) {
                violations.fetch_add(1, std::memory_order_relaxed);
                return;
            }
            for (std::size_t i = 0; i < ea.size(); ++i) {
                compared.fetch_add(1, std::memory_order_relaxed);
                if (ea[i].label != eb[i].label || eb[i].point[yi] < ea[i].point[yi])
                    violations.fetch_add(1, std::memory_order_relaxed);
            }
        }
    });
    r.pass = violations.load() == 0;
    r.detail = num(static_cast<double>(pairs)) + " coupled pairs, " +
               std::to_string(compared.load()) + " particle comparisons, " +
               std::to_string(violations.load()) + " order violations";
}

void check_branching_value(Ctx& c, CheckResult& r) {
    const FintechParams& fp = *c.scn.fintech;
    PointMeasure mu(1), d0(1), d1(1);
    mu.insert(Label{{0}}, {c.x0});
    mu.insert(Label{{1}}, {c.x0});
    d0.insert(Label{{0}}, {c.x0});
    d1.insert(Label{{1}}, {c.x0});

    ControlFamily fam;
    for (const double a : {0.0, 0.25, 0.5, 0.75, 1.0})
        fam.push_back(std::make_shared<ConstantControl>(a));

    BisectionSpec bs;
    bs.y_lo = fp.lower_bound(0.0) - 0.1;
    bs.y_hi = fp.upper_bound(0.0) + 0.1;
    bs.tol = 0.05;
    bs.eta = 0.01;
    bs.n_paths = 4000;

    SimConfig base;
    base.dt = 1.0 / 256.0;
    base.seed = c.opts.seed;

    const ValueEstimate vm = estimate_value(0.0, mu, c.scn.model, c.scn.law, c.scn.target, fam,
                                            bs, base, c.threads);
    const ValueEstimate v0 = estimate_value(0.0, d0, c.scn.model, c.scn.law, c.scn.target, fam,
                                            bs, base, c.threads);
    const ValueEstimate v1 = estimate_value(0.0, d1, c.scn.model, c.scn.law, c.scn.target, fam,
                                            bs, base, c.threads);
    const double best_single = std::max(v0.y_star, v1.y_star);
    const double diff = std::abs(vm.y_star - best_single);
    r.pass = diff <= 0.15;
    r.detail = "pair " + num(vm.y_star) + " vs singletons max(" + num(v0.y_star) + ", " +
               num(v1.y_star) + "); gap " + num(diff) + " (allowed 0.15)";
}

void check_pde_bracket(Ctx& c, CheckResult& r) {
    const FintechParams& fp = *c.scn.fintech;
    const ValueSurface& s = c.solved();
    const double v = s.root_value(0.0, c.x0);
    const double lb = fp.lower_bound(0.0), ub = fp.upper_bound(0.0);
    r.pass = v >= lb - 1e-2 && v <= ub + 1e-2;
    r.detail = "v(0," + num(c.x0) + ") = " + num(v) + " in [" + num(lb) + ", " + num(ub) +
               "] +- 1e-2; nt = " + std::to_string(s.grid.nt);
}

void check_feedback_consistency(Ctx& c, CheckResult& r) {
    const std::size_t n_paths = 2000;
    c.solved();
    const auto fb = extract_feedback(c.surface, c.scn.model);
    const double v = c.surface->root_value(0.0, c.x0);
    SimConfig base;
    base.dt = 1.0 / 256.0;
    base.seed = c.opts.seed;
    const PointMeasure pos = root_at(c.x0);
    const McRate high = failure_rate(0.0, pos, v + 0.05, c.scn.model, c.scn.law, c.scn.target,
                                     *fb, base, n_paths, c.threads);
    const McRate low = failure_rate(0.0, pos, v - 0.2, c.scn.model, c.scn.law, c.scn.target,
                                    *fb, base, n_paths, c.threads);
    const bool high_ok = high.rate <= 0.05;
    const bool low_ok = low.rate >= 0.50;
    r.pass = high_ok && low_ok;
    r.detail = "from v+0.05: failure " + num(high.rate) + " (need <= 0.05); from v-0.2: failure " +
               num(low.rate) + " (need >= 0.5); projected control lookups " +
               std::to_string(fb->projected_evaluations());
}

void check_kernel_geometry(Ctx& c, CheckResult& r) {
    const FintechParams& fp = *c.scn.fintech;
    CounterRng rng(c.opts.seed, stream_id(777, 0, StreamPurpose::generic));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = c.grid.x_lo + (c.grid.x_hi - c.grid.x_lo) * rng.uniform01();
        const double p = -0.5 + 2.0 * rng.uniform01();
        const double analytic = fp.c * std::min(p, 1.0 - p);
        const double numeric = kernel_margin(c.scn.model, x, p);
        worst = std::max(worst, std::abs(numeric - analytic));
    }
    std::size_t member_errors = 0;
    const std::size_t na = c.scn.model.controls.size();
    for (int i = 0; i < 20; ++i) {
        const double x = c.grid.x_lo + (c.grid.x_hi - c.grid.x_lo) * rng.uniform01();
        const std::size_t j = std::min<std::size_t>(
            static_cast<std::size_t>(rng.uniform01() * static_cast<double>(na)), na - 1);
        const auto on = kernel(c.scn.model, x, c.scn.model.controls[j], 0.0);
        if (on.size() != 1 || on[0] != j) ++member_errors;
        const auto off = kernel(c.scn.model, x, 1.0 + 0.3 * (1.0 + rng.uniform01()), 0.0);
        if (!off.empty()) ++member_errors;
    }
    r.pass = worst <= 1e-12 && member_errors == 0;
    r.detail = "max |signed distance - analytic| = " + num(worst) + " over 100 draws; " +
               std::to_string(member_errors) + " membership mismatches";
}

void check_restart_conditioning(Ctx& c, CheckResult& r) {
    const std::size_t n = 10000;
    const double T = c.scn.target.horizon;
    const double theta = 0.5 * T;
    const ConstantControl ctl(c.scn.model.controls[c.scn.model.controls.size() / 2]);
    const PointMeasure init = with_level(root_at(c.x0), 0.0);

    struct Stats {
        std::vector<double> count, sx, sy;
    };
    Stats a, b;
    a.count.resize(n);
    a.sx.resize(n);
    a.sy.resize(n);
    b = a;

    const auto collect = [](const PointMeasure& pop, double& cnt, double& sx, double& sy) {
        cnt = static_cast<double>(pop.size());
        sx = sy = 0.0;
        for (const auto& e : pop.entries()) {
            sx += e.point[0];
            sy += e.point[1];
        }
    };

    parallel_for(n, c.threads, [&](std::size_t p) {
        SimConfig full;
        full.dt = 1.0 / 128.0;
        full.horizon = T;
        full.seed = c.opts.seed;
        full.path_index = p;
        const PopulationPath pa = simulate(0.0, init, c.scn.model, c.scn.law, ctl, full);
        collect(pa.terminal(), a.count[p], a.sx[p], a.sy[p]);

        SimConfig head = full;
        head.seed = c.opts.seed + 1;
        head.horizon = theta;
        const PopulationPath ph = simulate(0.0, init, c.scn.model, c.scn.law, ctl, head);
        SimConfig tail = full;
        tail.seed = c.opts.seed + 1;
        tail.path_index = n + p; // fresh substreams for the continuation
        const PopulationPath pb = restart(ph, theta, c.scn.model, c.scn.law, ctl, tail);
        collect(pb.terminal(), b.count[p], b.sx[p], b.sy[p]);
    });

    const auto zstat = [n](const std::vector<double>& u, const std::vector<double>& v) {
        double mu = 0, mv = 0;
        for (std::size_t i = 0; i < n; ++i) {
            mu += u[i];
            mv += v[i];
        }
        mu /= static_cast<double>(n);
        mv /= static_cast<double>(n);
        double su = 0, sv = 0;
        for (std::size_t i = 0; i < n; ++i) {
            su += (u[i] - mu) * (u[i] - mu);
            sv += (v[i] - mv) * (v[i] - mv);
        }
        const double var = (su + sv) / (static_cast<double>(n) * (static_cast<double>(n) - 1));
        return var > 0.0 ? std::abs(mu - mv) / std::sqrt(var) : 0.0;
    };

    const double z_count = zstat(a.count, b.count);
    const double z_x = zstat(a.sx, b.sx);
    const double z_y = zstat(a.sy, b.sy);
    r.pass = z_count < 4.0 && z_x < 4.0 && z_y < 4.0;
    r.detail = "z(|V_T|) = " + num(z_count) + ", z(sum x) = " + num(z_x) +
               ", z(sum y) = " + num(z_y) + " (all must be < 4)";
}

void check_vi_structure(Ctx& c, CheckResult& r) {
    const ValueSurface& s1 = c.solved();
    GridSpec g2 = c.grid, g3 = c.grid;
    g2.nx = 2 * (c.grid.nx - 1) + 1;
    g3.nx = 4 * (c.grid.nx - 1) + 1;
    const ValueSurface s2 = solve_vi(c.scn.model, c.scn.law, c.scn.target, g2, c.scn.slope_cone);
    const ValueSurface s3 = solve_vi(c.scn.model, c.scn.law, c.scn.target, g3, c.scn.slope_cone);

    double worst_obstacle = 0.0, worst_facelift = 0.0, worst_terminal = 0.0;
    for (const ValueSurface* s : {&s1, &s2, &s3}) {
        worst_obstacle = std::max(worst_obstacle, s->diagnostics.max_obstacle_violation);
        worst_facelift = std::max(worst_facelift, s->diagnostics.max_facelift_gap);
        worst_terminal = std::max(worst_terminal, s->diagnostics.max_terminal_gap);
    }
    const double v1 = s1.root_value(0.0, c.x0);
    const double v2 = s2.root_value(0.0, c.x0);
    const double v3 = s3.root_value(0.0, c.x0);
    const double d1 = std::abs(v1 - v2), d2 = std::abs(v2 - v3);
    const bool invariants = worst_obstacle <= 1e-12 && worst_facelift <= 1e-12 &&
                            worst_terminal <= 1e-12;
    const bool converging = d2 <= 0.6 * d1 + 1e-9;
    r.pass = invariants && converging;
    r.detail = "obstacle " + num(worst_obstacle) + ", envelope " + num(worst_facelift) +
               ", terminal " + num(worst_terminal) + "; roots " + num(v1) + " / " + num(v2) +
               " / " + num(v3) + ", refinement deltas " + num(d1) + " -> " + num(d2);
}

void check_rerun_determinism(Ctx& c, CheckResult& r) {
    const std::string& cli = c.opts.cli_path;
    const std::string& src = c.scn.source_path;
    const auto tag = hex64(mix64(c.opts.seed ^ static_cast<std::uint64_t>(
                                                   std::chrono::steady_clock::now()
                                                       .time_since_epoch()
                                                       .count())));
    const fs::path tmp = fs::temp_directory_path() / ("bt-verify-" + tag);
    fs::create_directories(tmp);

    const auto shell = [](const std::string& cmd) { return std::system(cmd.c_str()) == 0; };
    const auto same_bytes = [](const fs::path& p, const fs::path& q) {
        return read_file_bytes(p.string()) == read_file_bytes(q.string());
    };

    bool ok = true;
    std::string what;
    for (int i = 0; i < 2; ++i) {
        const fs::path out = tmp / ("sim" + std::to_string(i));
        ok = ok && shell(quoted(cli) + " simulate " + quoted(src) +
                         " --paths 100 --dt 0.00390625 --seed 7 --threads 1 --record --out " +
                         quoted(out.string()) + " >/dev/null 2>&1");
    }
    if (!ok) {
        what = "simulate rerun did not exit 0";
    } else if (!same_bytes(tmp / "sim0/population.csv", tmp / "sim1/population.csv") ||
               !same_bytes(tmp / "sim0/events.csv", tmp / "sim1/events.csv")) {
        ok = false;
        what = "simulate reruns differ";
    }
    if (ok) {
        for (int i = 0; i < 2; ++i) {
            const fs::path out = tmp / ("solve" + std::to_string(i));
            ok = ok && shell(quoted(cli) + " solve " + quoted(src) +
                             " --nx 101 --depth 2 --threads 1 --out " + quoted(out.string()) +
                             " >/dev/null 2>&1");
        }
        if (!ok) {
            what = "solve rerun did not exit 0";
        } else if (!same_bytes(tmp / "solve0/surface.csv", tmp / "solve1/surface.csv")) {
            ok = false;
            what = "solve reruns differ";
        }
    }
    fs::remove_all(tmp);
    r.pass = ok;
    r.detail = ok ? "population/events/surface CSVs byte-identical across reruns" : what;
}

} // namespace

std::vector<CheckResult> run_checks(const Scenario& scenario, const VerifyOptions& opts) {
    Ctx ctx{scenario, opts, resolve_threads(opts.threads), 0.0, GridSpec{}, nullptr};
    if (scenario.fintech && scenario.fintech->strike0 > 0.0)
        ctx.x0 = std::log(scenario.fintech->strike0);
    ctx.grid.tree_depth = 3;

    const bool fast = opts.level == "fast";
    const bool fintech = scenario.fintech.has_value();
    const bool can_spawn = !opts.cli_path.empty() && !scenario.source_path.empty();

    struct Row {
        const char* name;
        bool in_fast;       // part of the cheap subset
        bool needs_fintech; // relies on the closed-form scenario
        bool needs_cli;
        double budget;
        void (*fn)(Ctx&, CheckResult&);
    };
    constexpr bool F = false, T = true;
    const Row rows[] = {
        {"scenario-sanity", T, F, F, 0, check_scenario_sanity},
        {"population-growth", F, F, F, 30, check_population_growth},
        {"crn-monotonicity", T, F, F, 0, check_crn_monotonicity},
        {"branching-value", F, T, F, 120, check_branching_value},
        {"pde-bracket", F, T, F, 60, check_pde_bracket},
        {"feedback-consistency", F, T, F, 0, check_feedback_consistency},
        {"kernel-geometry", T, T, F, 0, check_kernel_geometry},
        {"restart-conditioning", F, F, F, 0, check_restart_conditioning},
        {"vi-structure", F, F, F, 0, check_vi_structure},
        {"rerun-determinism", F, F, T, 0, check_rerun_determinism},
    };

    const auto wanted = [&](const char* name) {
        return opts.only.empty() ||
               std::find(opts.only.begin(), opts.only.end(), name) != opts.only.end();
    };

    std::vector<CheckResult> out;
    for (const Row& row : rows) {
        if (!wanted(row.name))
            out.push_back(skipped(row.name, "filtered by options"));
        else if (fast && !row.in_fast)
            out.push_back(skipped(row.name, "full level only"));
        else if (row.needs_fintech && !fintech)
            out.push_back(skipped(row.name, "needs the closed-form scenario"));
        else if (row.needs_cli && !can_spawn)
            out.push_back(skipped(row.name, "no CLI binary/scenario file to respawn"));
        else
            out.push_back(run_one(ctx, row.name, row.budget, row.fn));
    }
    return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (c.ran && !c.pass) return false;
    return true;
}

std::string checks_to_json(const std::vector<CheckResult>& checks, const VerifyOptions& opts) {
    nlohmann::ordered_json j;
    j["level"] = opts.level;
    j["seed"] = opts.seed;
    j["all_pass"] = all_passed(checks);
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["ran"] = c.ran;
        e["pass"] = c.pass;
        e["seconds"] = c.seconds;
        e["detail"] = c.detail;
        j["checks"].push_back(e);
    }
    return j.dump(2) + "\n";
}

} // namespace bt
