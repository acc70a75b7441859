// Command-line front end: scenario loading, simulation dumps, Monte Carlo
// value estimation, the tree solver, the consistency probe, and the
// verification suite.  Exit codes: 0 ok, 1 check/runtime failure, 2 input
// error, 3 numerical-config error.

#include "branchtarget/errors.hpp"
#include "branchtarget/hjb.hpp"
#include "branchtarget/parallel.hpp"
#include "branchtarget/report.hpp"
#include "branchtarget/scenario.hpp"
#include "branchtarget/simulate.hpp"
#include "branchtarget/target.hpp"
#include "branchtarget/verify.hpp"
#include "branchtarget/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Common {
    std::string scenario_path;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out = ".";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("scenario", c.scenario_path, "scenario JSON file")->required();
    cmd->add_option("--seed", c.seed, "base RNG seed");
    cmd->add_option("--threads", c.threads,
                    "worker threads (0 = auto; BRANCH_TARGET_THREADS wins)");
    cmd->add_option("--out", c.out, "output directory");
}

double default_x0(const bt::Scenario& scn) {
    if (scn.fintech && scn.fintech->strike0 > 0.0) return std::log(scn.fintech->strike0);
    return 0.0;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

bt::RunManifest make_manifest(const std::string& command, const bt::Scenario& scn,
                              int threads) {
    bt::RunManifest m;
    m.version = bt::kVersion;
    m.command = command;
    m.scenario_path = scn.source_path;
    m.scenario_digest = scn.source_digest;
    m.scenario_kind = scn.kind;
    m.threads = threads;
    return m;
}

void note_output(bt::RunManifest& m, const std::string& path) {
    m.outputs.emplace_back(path, bt::hex64(bt::fnv1a64(bt::read_file_bytes(path))));
}

void write_report(const std::string& dir, bt::RunManifest& m, const ordered_json& extra) {
    ordered_json j;
    j["manifest"] = ordered_json::parse(m.to_json());
    for (const auto& [k, v] : extra.items()) j[k] = v;
    bt::write_file_bytes(dir + "/report.json", j.dump(2) + "\n");
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// ---- simulate ---------------------------------------------------------

struct SimulateOpts {
    Common common;
    std::size_t paths = 100;
    double dt = 1.0 / 256.0;
    double x0 = kNaN;
    double y0 = 0.0;
    bool record = false;
    std::vector<double> snapshots;
    std::size_t cap = 1'000'000;
};

int cmd_simulate(const SimulateOpts& o, const std::string& command) {
    Timer timer;
    const bt::Scenario scn = bt::load_scenario(o.common.scenario_path);
    const int threads = bt::resolve_threads(o.common.threads);
    const double x0 = std::isnan(o.x0) ? default_x0(scn) : o.x0;
    fs::create_directories(o.common.out);

    bt::PointMeasure init(scn.model.dim_x + 1);
    {
        std::vector<double> point(static_cast<std::size_t>(scn.model.dim_x), x0);
        point.push_back(o.y0);
        init.insert(bt::Label::root(), std::move(point));
    }
    const bt::ConstantControl control(scn.model.controls.front());

    std::vector<bt::PopulationPath> runs(o.paths);
    bt::parallel_for(o.paths, threads, [&](std::size_t p) {
        bt::SimConfig cfg;
        cfg.horizon = scn.target.horizon;
        cfg.dt = o.dt;
        cfg.seed = o.common.seed;
        cfg.path_index = p;
        cfg.record = o.record;
        cfg.snapshot_times = o.snapshots;
        cfg.population_cap = o.cap;
        runs[p] = bt::simulate(0.0, init, scn.model, scn.law, control, cfg);
    });

    const std::string pop_path = o.common.out + "/population.csv";
    {
        bt::CsvWriter csv(pop_path);
        std::vector<std::string> header{"path", "time", "label"};
        for (int k = 0; k < scn.model.dim_x; ++k)
            header.push_back(scn.model.dim_x == 1 ? "x" : "x" + std::to_string(k));
        header.push_back("y");
        csv.row(header);
        for (std::size_t p = 0; p < runs.size(); ++p) {
            for (std::size_t k = 0; k < runs[p].times.size(); ++k) {
                for (const auto& e : runs[p].states[k].entries()) {
                    std::vector<std::string> row{std::to_string(p),
                                                 bt::format_double(runs[p].times[k]),
                                                 e.label.str()};
                    for (const double v : e.point) row.push_back(bt::format_double(v));
                    csv.row(row);
                }
            }
        }
    }

    const std::string ev_path = o.common.out + "/events.csv";
    {
        bt::CsvWriter csv(ev_path);
        csv.row({"path", "time", "parent", "k"});
        for (std::size_t p = 0; p < runs.size(); ++p)
            for (const auto& ev : runs[p].events)
                csv.row({std::to_string(p), bt::format_double(ev.time), ev.parent.str(),
                         std::to_string(ev.offspring)});
    }

    double mean = 0.0, max_peak = 0.0;
    for (const auto& r : runs) {
        mean += static_cast<double>(r.peak_population);
        max_peak = std::max(max_peak, static_cast<double>(r.peak_population));
    }
    mean /= static_cast<double>(runs.size());
    double var = 0.0;
    for (const auto& r : runs) {
        const double d = static_cast<double>(r.peak_population) - mean;
        var += d * d;
    }
    var /= std::max<double>(1.0, static_cast<double>(runs.size()) - 1.0);
    const double se = std::sqrt(var / static_cast<double>(runs.size()));
    const double bound = std::exp(scn.law.gamma * scn.law.mean() * scn.target.horizon);

    bt::RunManifest m = make_manifest(command, scn, threads);
    m.params = {{"paths", std::to_string(o.paths)},
                {"dt", bt::format_double(o.dt)},
                {"seed", std::to_string(o.common.seed)},
                {"x0", bt::format_double(x0)},
                {"y0", bt::format_double(o.y0)},
                {"record", o.record ? "1" : "0"},
                {"population_cap", std::to_string(o.cap)}};
    note_output(m, pop_path);
    note_output(m, ev_path);
    m.wall_seconds = timer.seconds();

    ordered_json growth;
    growth["mean_peak"] = mean;
    growth["se_peak"] = se;
    growth["max_peak"] = max_peak;
    growth["expected_sup_bound"] = bound;
    growth["within_bound"] = mean <= bound + 3.0 * se + 1e-12;
    ordered_json extra;
    extra["growth"] = growth;
    write_report(o.common.out, m, extra);

    std::printf("simulate: %zu paths, mean peak %.4g (bound %.4g), outputs in %s\n", o.paths,
                mean, bound, o.common.out.c_str());
    return 0;
}

// ---- value-mc ---------------------------------------------------------

struct ValueMcOpts {
    Common common;
    std::size_t paths = 2000;
    double dt = 1.0 / 256.0;
    double tol = 0.05;
    double eta = 0.01;
    double x0 = kNaN;
    double y_lo = kNaN;
    double y_hi = kNaN;
    std::vector<double> controls{0.0, 0.25, 0.5, 0.75, 1.0};
};

int cmd_value_mc(const ValueMcOpts& o, const std::string& command) {
    Timer timer;
    const bt::Scenario scn = bt::load_scenario(o.common.scenario_path);
    const int threads = bt::resolve_threads(o.common.threads);
    const double x0 = std::isnan(o.x0) ? default_x0(scn) : o.x0;
    fs::create_directories(o.common.out);

    bt::BisectionSpec spec;
    spec.tol = o.tol;
    spec.eta = o.eta;
    spec.n_paths = o.paths;
    if (!std::isnan(o.y_lo)) {
        spec.y_lo = o.y_lo;
    } else if (scn.fintech) {
        spec.y_lo = scn.fintech->lower_bound(0.0) - 0.1;
    } else {
        throw bt::InputError("value-mc: --ylo is required for custom scenarios");
    }
    if (!std::isnan(o.y_hi)) {
        spec.y_hi = o.y_hi;
    } else if (scn.fintech) {
        spec.y_hi = scn.fintech->upper_bound(0.0) + 0.1;
    } else {
        throw bt::InputError("value-mc: --yhi is required for custom scenarios");
    }

    bt::ControlFamily family;
    for (const double a : o.controls) family.push_back(std::make_shared<bt::ConstantControl>(a));

    bt::PointMeasure positions(scn.model.dim_x);
    positions.insert(bt::Label::root(),
                     std::vector<double>(static_cast<std::size_t>(scn.model.dim_x), x0));

    bt::SimConfig base;
    base.dt = o.dt;
    base.seed = o.common.seed;

    const bt::ValueEstimate est = bt::estimate_value(0.0, positions, scn.model, scn.law,
                                                     scn.target, family, spec, base, threads);

    const std::string csv_path = o.common.out + "/bisection.csv";
    {
        bt::CsvWriter csv(csv_path);
        csv.row({"y", "control_id", "rate", "SE"});
        for (const auto& t : est.trace)
            csv.row({bt::format_double(t.y), std::to_string(t.control),
                     bt::format_double(t.rate), bt::format_double(t.se)});
    }

    bt::RunManifest m = make_manifest(command, scn, threads);
    m.params = {{"paths", std::to_string(o.paths)},   {"dt", bt::format_double(o.dt)},
                {"tol", bt::format_double(o.tol)},    {"eta", bt::format_double(o.eta)},
                {"seed", std::to_string(o.common.seed)}, {"x0", bt::format_double(x0)},
                {"y_lo", bt::format_double(spec.y_lo)},  {"y_hi", bt::format_double(spec.y_hi)}};
    note_output(m, csv_path);
    m.wall_seconds = timer.seconds();

    ordered_json e;
    e["y_star"] = est.y_star;
    e["bracket"] = {est.y_lo, est.y_hi};
    e["iterations"] = est.iterations;
    e["rate_at_initial_lo"] = est.rate_lo;
    e["rate_at_initial_hi"] = est.rate_hi;
    e["best_control_at_hi"] = o.controls[est.best_control_hi];
    e["fast_path"] = est.fast_path;
    ordered_json extra;
    extra["estimate"] = e;
    write_report(o.common.out, m, extra);

    std::printf("value-mc: y* = %.6g (bracket [%.6g, %.6g], %d bisections, %s path)\n",
                est.y_star, est.y_lo, est.y_hi, est.iterations,
                est.fast_path ? "fast" : "resimulated");
    return 0;
}

// ---- solve ------------------------------------------------------------

struct SolveOpts {
    Common common;
    bt::GridSpec grid;
    double x0 = kNaN;
};

int cmd_solve(const SolveOpts& o, const std::string& command) {
    Timer timer;
    const bt::Scenario scn = bt::load_scenario(o.common.scenario_path);
    const int threads = bt::resolve_threads(o.common.threads);
    const double x0 = std::isnan(o.x0) ? default_x0(scn) : o.x0;
    fs::create_directories(o.common.out);

    const auto surface = std::make_shared<bt::ValueSurface>(
        bt::solve_vi(scn.model, scn.law, scn.target, o.grid, scn.slope_cone));
    const auto feedback = bt::extract_feedback(surface, scn.model);

    const std::string csv_path = o.common.out + "/surface.csv";
    {
        bt::CsvWriter csv(csv_path);
        csv.row({"label", "t", "x", "v", "feedback_a", "kernel_empty"});
        const auto xs = surface->grid.xs();
        const double dt = surface->horizon / surface->grid.nt;
        for (std::size_t li = 0; li < surface->labels.size(); ++li) {
            for (int n = 0; n <= surface->grid.nt; ++n) {
                const double t = n * dt;
                for (int j = 0; j < surface->grid.nx; ++j) {
                    const double v = surface->at(li, n, j);
                    const auto before = feedback->projected_evaluations();
                    const double a =
                        (*feedback)(surface->labels[li], t,
                                    std::span<const double>(&xs[static_cast<std::size_t>(j)], 1),
                                    v);
                    const bool empty = feedback->projected_evaluations() != before;
                    csv.row({surface->labels[li].str(), bt::format_double(t),
                             bt::format_double(xs[static_cast<std::size_t>(j)]),
                             bt::format_double(v), bt::format_double(a), empty ? "1" : "0"});
                }
            }
        }
    }

    // tree-truncation sensitivity: root slice against one less generation
    double truncation_delta = 0.0;
    if (o.grid.tree_depth >= 1) {
        bt::GridSpec shallow = o.grid;
        shallow.tree_depth = o.grid.tree_depth - 1;
        const bt::ValueSurface s2 =
            bt::solve_vi(scn.model, scn.law, scn.target, shallow, scn.slope_cone);
        for (int j = 0; j < o.grid.nx; ++j)
            truncation_delta =
                std::max(truncation_delta, std::abs(surface->at(0, 0, j) - s2.at(0, 0, j)));
    }

    bt::RunManifest m = make_manifest(command, scn, threads);
    m.params = {{"nx", std::to_string(o.grid.nx)},
                {"nt", std::to_string(surface->grid.nt)},
                {"x_lo", bt::format_double(o.grid.x_lo)},
                {"x_hi", bt::format_double(o.grid.x_hi)},
                {"tree_depth", std::to_string(o.grid.tree_depth)},
                {"offspring_index_cap", std::to_string(o.grid.offspring_index_cap)},
                {"epsilon", bt::format_double(o.grid.epsilon)}};
    note_output(m, csv_path);
    m.wall_seconds = timer.seconds();

    const auto& diag = surface->diagnostics;
    ordered_json d;
    d["root_value_at_x0"] = surface->root_value(0.0, x0);
    d["x0"] = x0;
    d["labels"] = surface->labels.size();
    d["cfl"] = {{"dt", diag.cfl.dt}, {"bound", diag.cfl.bound}, {"ok", diag.cfl.ok}};
    d["max_obstacle_violation"] = diag.max_obstacle_violation;
    d["max_facelift_gap"] = diag.max_facelift_gap;
    d["max_terminal_gap"] = diag.max_terminal_gap;
    d["truncation_root_delta_vs_depth_minus_1"] = truncation_delta;
    ordered_json extra;
    extra["solve"] = d;
    write_report(o.common.out, m, extra);

    std::printf("solve: %zu labels, nt = %d, v(0, %.4g) = %.6g, outputs in %s\n",
                surface->labels.size(), surface->grid.nt, x0, surface->root_value(0.0, x0),
                o.common.out.c_str());
    return 0;
}

// ---- dpp-check --------------------------------------------------------

struct DppOpts {
    Common common;
    double theta = kNaN; // default: half horizon
    double slack = 0.05;
    std::size_t paths = 2000;
    double dt = 1.0 / 256.0;
    double x0 = kNaN;
    double fail_above = kNaN; // optional verdict threshold
    bt::GridSpec grid;
};

int cmd_dpp_check(const DppOpts& o, const std::string& command) {
    Timer timer;
    const bt::Scenario scn = bt::load_scenario(o.common.scenario_path);
    const int threads = bt::resolve_threads(o.common.threads);
    const double x0 = std::isnan(o.x0) ? default_x0(scn) : o.x0;
    const double theta = std::isnan(o.theta) ? 0.5 * scn.target.horizon : o.theta;
    fs::create_directories(o.common.out);

    const auto surface = std::make_shared<bt::ValueSurface>(
        bt::solve_vi(scn.model, scn.law, scn.target, o.grid, scn.slope_cone));
    const auto feedback = bt::extract_feedback(surface, scn.model);

    bt::SimConfig base;
    base.dt = o.dt;
    base.seed = o.common.seed;
    const std::vector<double> start{x0};
    const bt::DppReport rep = bt::dpp_check(0.0, start, *surface, scn.model, scn.law, *feedback,
                                            theta, o.slack, base, o.paths, threads);

    const std::string csv_path = o.common.out + "/violations.csv";
    {
        bt::CsvWriter csv(csv_path);
        csv.row({"path", "label", "x", "y", "surface_v"});
        for (const auto& v : rep.violating)
            csv.row({std::to_string(v.path_index), v.label, bt::format_double(v.x),
                     bt::format_double(v.y), bt::format_double(v.surface_value)});
    }

    bt::RunManifest m = make_manifest(command, scn, threads);
    m.params = {{"theta", bt::format_double(theta)},
                {"slack", bt::format_double(o.slack)},
                {"paths", std::to_string(o.paths)},
                {"dt", bt::format_double(o.dt)},
                {"seed", std::to_string(o.common.seed)},
                {"x0", bt::format_double(x0)},
                {"nx", std::to_string(o.grid.nx)},
                {"tree_depth", std::to_string(o.grid.tree_depth)}};
    note_output(m, csv_path);
    m.wall_seconds = timer.seconds();

    ordered_json d;
    d["theta"] = rep.theta;
    d["y0"] = rep.y0;
    d["paths"] = rep.n_paths;
    d["counted"] = rep.counted;
    d["violations"] = rep.violations;
    d["violation_rate"] = rep.violation_rate;
    d["offgrid"] = rep.offgrid;
    d["offgrid_rate"] = rep.offgrid_rate;
    d["worst_gap"] = rep.worst_gap;
    ordered_json extra;
    extra["dpp"] = d;
    write_report(o.common.out, m, extra);

    std::printf("dpp-check: violation rate %.4g (%zu/%zu judged), off-grid rate %.4g, "
                "worst gap %.4g\n",
                rep.violation_rate, rep.violations, rep.counted, rep.offgrid_rate,
                rep.worst_gap);
    if (!std::isnan(o.fail_above) && rep.violation_rate > o.fail_above) return 1;
    return 0;
}

// ---- verify -----------------------------------------------------------

struct VerifyCliOpts {
    Common common;
    std::string level = "full";
    std::vector<std::string> only;
};

std::string self_path(const char* argv0) {
    std::error_code ec;
    const fs::path p = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) return p.string();
    return argv0 ? argv0 : "";
}

int cmd_verify(const VerifyCliOpts& o, const std::string& command, const char* argv0) {
    Timer timer;
    const bt::Scenario scn = bt::load_scenario(o.common.scenario_path);
    const int threads = bt::resolve_threads(o.common.threads);
    fs::create_directories(o.common.out);

    bt::VerifyOptions vo;
    vo.level = o.level;
    vo.seed = o.common.seed == 0 ? 20260817 : o.common.seed;
    vo.threads = o.common.threads;
    vo.cli_path = self_path(argv0);
    vo.only = o.only;

    const std::vector<bt::CheckResult> checks = bt::run_checks(scn, vo);
    for (const auto& c : checks) {
        const char* tag = !c.ran ? "SKIP" : c.pass ? "PASS" : "FAIL";
        std::printf("[%s] %-22s (%6.2fs) %s\n", tag, c.name.c_str(), c.seconds,
                    c.detail.c_str());
    }

    const std::string report_path = o.common.out + "/verify_report.json";
    bt::write_file_bytes(report_path, bt::checks_to_json(checks, vo));

    bt::RunManifest m = make_manifest(command, scn, threads);
    m.params = {{"level", o.level}, {"seed", std::to_string(vo.seed)}};
    note_output(m, report_path);
    m.wall_seconds = timer.seconds();
    write_report(o.common.out, m, ordered_json::object());

    const bool ok = bt::all_passed(checks);
    std::printf("verify: %s\n", ok ? "all checks passed" : "CHECK FAILURES");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"branching stochastic-target toolkit"};
    app.set_version_flag("--version", bt::kVersion);
    app.require_subcommand(1);

    SimulateOpts so;
    CLI::App* sim = app.add_subcommand("simulate", "run population paths and dump CSVs");
    add_common(sim, so.common);
    sim->add_option("--paths", so.paths, "number of Monte Carlo paths");
    sim->add_option("--dt", so.dt, "Euler step");
    sim->add_option("--x0", so.x0, "initial state (default: scenario-specific)");
    sim->add_option("--y0", so.y0, "initial tracked level");
    sim->add_flag("--record", so.record, "record every Euler stop, not just endpoints");
    sim->add_option("--snapshot", so.snapshots, "extra recorded times");
    sim->add_option("--cap", so.cap, "population explosion cap");

    ValueMcOpts vo;
    CLI::App* vmc = app.add_subcommand("value-mc", "Monte Carlo bisection for the target value");
    add_common(vmc, vo.common);
    vmc->add_option("--paths", vo.paths, "paths per rate estimate");
    vmc->add_option("--dt", vo.dt, "Euler step");
    vmc->add_option("--tol", vo.tol, "bisection half-width tolerance");
    vmc->add_option("--eta", vo.eta, "admissible failure probability");
    vmc->add_option("--x0", vo.x0, "initial state (default: scenario-specific)");
    vmc->add_option("--ylo", vo.y_lo, "bracket low end (default: scenario lower bound - 0.1)");
    vmc->add_option("--yhi", vo.y_hi, "bracket high end (default: scenario upper bound + 0.1)");
    vmc->add_option("--controls", vo.controls, "constant controls to race");

    SolveOpts lo;
    CLI::App* sol = app.add_subcommand("solve", "finite-difference solve on the label tree");
    add_common(sol, lo.common);
    sol->add_option("--nx", lo.grid.nx, "space nodes");
    sol->add_option("--nt", lo.grid.nt, "time steps (0 = auto CFL)");
    sol->add_option("--xlo", lo.grid.x_lo, "domain low end");
    sol->add_option("--xhi", lo.grid.x_hi, "domain high end");
    sol->add_option("--depth", lo.grid.tree_depth, "label tree depth");
    sol->add_option("--cap", lo.grid.offspring_index_cap, "tree width cap (0 = from law)");
    sol->add_option("--eps", lo.grid.epsilon, "extra control-matching slack");
    sol->add_option("--x0", lo.x0, "report the root value at this state");

    DppOpts do_;
    CLI::App* dpp = app.add_subcommand("dpp-check", "consistency probe of surface vs simulation");
    add_common(dpp, do_.common);
    dpp->add_option("--theta", do_.theta, "probe time (default: half horizon)");
    dpp->add_option("--slack", do_.slack, "initial level above the surface");
    dpp->add_option("--paths", do_.paths, "Monte Carlo paths");
    dpp->add_option("--dt", do_.dt, "Euler step");
    dpp->add_option("--x0", do_.x0, "initial state (default: scenario-specific)");
    dpp->add_option("--nx", do_.grid.nx, "space nodes for the surface");
    dpp->add_option("--depth", do_.grid.tree_depth, "label tree depth");
    dpp->add_option("--fail-above", do_.fail_above, "exit 1 when violation rate exceeds this");

    VerifyCliOpts ve;
    CLI::App* ver = app.add_subcommand("verify", "run the property suite");
    add_common(ver, ve.common);
    ver->add_option("--level", ve.level, "fast | full")
        ->check(CLI::IsMember({"fast", "full"}));
    ver->add_option("--only", ve.only, "run just the named checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = join_args(argc, argv);
    try {
        if (sim->parsed()) return cmd_simulate(so, command);
        if (vmc->parsed()) return cmd_value_mc(vo, command);
        if (sol->parsed()) return cmd_solve(lo, command);
        if (dpp->parsed()) return cmd_dpp_check(do_, command);
        if (ver->parsed()) return cmd_verify(ve, command, argv[0]);
    } catch (const bt::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const bt::NumericalConfigError& e) {
        std::fprintf(stderr, "numerical configuration error: %s\n", e.what());
        return 3;
    } catch (const bt::ExplosionError& e) {
        std::fprintf(stderr, "population explosion: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
