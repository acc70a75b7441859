#include "branchtarget/target.hpp"

#include "branchtarget/errors.hpp"
#include "branchtarget/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>

namespace bt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SimConfig path_config(const SimConfig& base, double horizon, std::uint64_t path_index) {
    SimConfig cfg = base;
    cfg.horizon = horizon;
    cfg.path_index = path_index;
    cfg.record = false;
    cfg.snapshot_times.clear();
    return cfg;
}

double binomial_se(double rate, std::size_t n) {
    return n > 0 ? std::sqrt(std::max(rate * (1.0 - rate), 0.0) / static_cast<double>(n)) : 0.0;
}

} // namespace

PointMeasure with_level(const PointMeasure& positions, double y) {
    PointMeasure out(positions.dim() + 1);
    for (const auto& e : positions.entries()) {
        std::vector<double> point = e.point;
        point.push_back(y);
        out.insert(e.label, std::move(point));
    }
    return out;
}

double terminal_margin(const PopulationPath& path, const TargetSpec& target) {
    if (!target.payoff) throw InputError("terminal margin: missing payoff");
    const PointMeasure& pop = path.terminal();
    const std::size_t d = pop.dim() - 1;
    double worst = kInf;
    for (const auto& e : pop.entries()) {
        const double g = target.payoff(e.label, std::span<const double>(e.point.data(), d));
        if (g == -kInf) continue; // never binds
        worst = std::min(worst, e.point[d] - g);
    }
    return worst;
}

bool terminal_success(const PopulationPath& path, const TargetSpec& target) {
    return terminal_margin(path, target) >= 0.0;
}

McRate failure_rate(double t0, const PointMeasure& positions, double y0,
                    const CoefficientModel& model, const OffspringLaw& law,
                    const TargetSpec& target, const FeedbackControl& control,
                    const SimConfig& base, std::size_t n_paths, int threads) {
    const PointMeasure initial = with_level(positions, y0);
    std::atomic<std::size_t> failures{0};
    parallel_for(n_paths, threads, [&](std::size_t p) {
        const PopulationPath path =
            simulate(t0, initial, model, law, control, path_config(base, target.horizon, p));
        if (!terminal_success(path, target)) failures.fetch_add(1, std::memory_order_relaxed);
    });
    McRate r;
    r.n = n_paths;
    r.failures = failures.load();
    r.rate = n_paths > 0 ? static_cast<double>(r.failures) / static_cast<double>(n_paths) : 0.0;
    r.se = binomial_se(r.rate, n_paths);
    return r;
}

ValueEstimate estimate_value(double t0, const PointMeasure& positions,
                             const CoefficientModel& model, const OffspringLaw& law,
                             const TargetSpec& target, const ControlFamily& controls,
                             const BisectionSpec& spec, const SimConfig& base, int threads) {
    if (controls.empty()) throw InputError("value estimation: no controls supplied");
    for (const auto& c : controls)
        if (!c) throw InputError("value estimation: null control");
    if (!(spec.y_lo < spec.y_hi)) throw InputError("value estimation: need y_lo < y_hi");
    if (!(spec.tol > 0.0)) throw InputError("value estimation: tol must be > 0");
    if (!(spec.eta >= 0.0 && spec.eta < 1.0))
        throw InputError("value estimation: eta must lie in [0, 1)");
    if (spec.n_paths == 0) throw InputError("value estimation: n_paths must be >= 1");

    bool fast = !model.target_drift_in_y;
    for (const auto& c : controls) fast = fast && !c->depends_on_y();

    const std::size_t nc = controls.size();
    const std::size_t np = spec.n_paths;

    ValueEstimate est;
    est.fast_path = fast;

    // best (smallest) failure rate over controls at an initial level y, with
    // every evaluation appended to the trace
    std::function<std::pair<double, std::size_t>(double)> best_rate;

    std::vector<double> offsets; // fast path: nc * np worst margins at y = 0
    const PointMeasure at_zero = with_level(positions, 0.0);
    if (fast) {
        offsets.assign(nc * np, 0.0);
        parallel_for(nc * np, threads, [&](std::size_t i) {
            const std::size_t c = i / np, p = i % np;
            const PopulationPath path = simulate(t0, at_zero, model, law, *controls[c],
                                                 path_config(base, target.horizon, p));
            offsets[i] = terminal_margin(path, target);
        });
        best_rate = [&est, &offsets, nc, np](double y) {
            double best = kInf;
            std::size_t best_c = 0;
            for (std::size_t c = 0; c < nc; ++c) {
                std::size_t fails = 0;
                for (std::size_t p = 0; p < np; ++p)
                    if (offsets[c * np + p] + y < 0.0) ++fails;
                const double rate = static_cast<double>(fails) / static_cast<double>(np);
                est.trace.push_back({y, c, rate, binomial_se(rate, np)});
                if (rate < best) {
                    best = rate;
                    best_c = c;
                }
            }
            return std::make_pair(best, best_c);
        };
    } else {
        best_rate = [&](double y) {
            double best = kInf;
            std::size_t best_c = 0;
            for (std::size_t c = 0; c < nc; ++c) {
                const McRate r = failure_rate(t0, positions, y, model, law, target, *controls[c],
                                              base, np, threads);
                est.trace.push_back({y, c, r.rate, r.se});
                if (r.rate < best) {
                    best = r.rate;
                    best_c = c;
                }
            }
            return std::make_pair(best, best_c);
        };
    }

    const auto [rate_lo, c_lo] = best_rate(spec.y_lo);
    (void)c_lo;
    const auto [rate_hi, c_hi] = best_rate(spec.y_hi);
    est.rate_lo = rate_lo;
    est.rate_hi = rate_hi;
    est.best_control_hi = c_hi;
    if (rate_lo <= spec.eta)
        throw InputError("value estimation: some control already passes at y_lo; "
                         "lower the bracket");
    if (rate_hi > spec.eta)
        throw InputError("value estimation: no control passes at y_hi; raise the bracket");

    double lo = spec.y_lo, hi = spec.y_hi;
    while (hi - lo > 2.0 * spec.tol) {
        const double mid = 0.5 * (lo + hi);
        if (best_rate(mid).first <= spec.eta)
            hi = mid;
        else
            lo = mid;
        ++est.iterations;
    }
    est.y_lo = lo;
    est.y_hi = hi;
    est.y_star = 0.5 * (lo + hi);
    return est;
}

DppReport dpp_check(double t0, std::span<const double> x0, const ValueSurface& surface,
                    const CoefficientModel& model, const OffspringLaw& law,
                    const FeedbackControl& control, double theta, double slack,
                    const SimConfig& base, std::size_t n_paths, int threads) {
    if (x0.size() != 1) throw InputError("dpp check: surfaces are univariate in x");
    if (!(theta > t0)) throw InputError("dpp check: theta must exceed the start time");
    if (theta > surface.horizon + 1e-12)
        throw InputError("dpp check: theta past the surface horizon");

    constexpr std::size_t kViolationCap = 256;

    DppReport rep;
    rep.theta = theta;
    rep.n_paths = n_paths;
    rep.y0 = surface.root_value(t0, x0[0]) + slack;

    std::vector<double> point{x0[0]};
    const PointMeasure initial = with_level(singleton(1, Label::root(), point), rep.y0);
    std::atomic<std::size_t> counted{0}, offgrid{0}, violations{0};
    std::mutex agg_mutex;
    double worst = 0.0;
    std::vector<DppReport::Violation> offenders;

    parallel_for(n_paths, threads, [&](std::size_t p) {
        const PopulationPath path =
            simulate(t0, initial, model, law, control, path_config(base, theta, p));
        const PointMeasure& pop = path.terminal();
        double margin = kInf;
        std::vector<DppReport::Violation> local;
        for (const auto& e : pop.entries()) {
            const auto idx = surface.label_index(e.label);
            if (!idx || !surface.x_in_domain(e.point[0])) {
                offgrid.fetch_add(1, std::memory_order_relaxed);
                return;
            }
            const double v = surface.value(*idx, theta, e.point[0]);
            const double m = e.point[1] - v;
            margin = std::min(margin, m);
            if (m < -1e-9)
                local.push_back({p, e.label.str(), e.point[0], e.point[1], v});
        }
        counted.fetch_add(1, std::memory_order_relaxed);
        if (margin < -1e-9) {
            violations.fetch_add(1, std::memory_order_relaxed);
            const std::lock_guard<std::mutex> lock(agg_mutex);
            worst = std::min(worst, margin);
            for (auto& v : local)
                if (offenders.size() < kViolationCap) offenders.push_back(std::move(v));
        }
    });

    rep.counted = counted.load();
    rep.offgrid = offgrid.load();
    rep.violations = violations.load();
    rep.violation_rate =
        rep.counted > 0 ? static_cast<double>(rep.violations) / static_cast<double>(rep.counted)
                        : 0.0;
    rep.offgrid_rate =
        n_paths > 0 ? static_cast<double>(rep.offgrid) / static_cast<double>(n_paths) : 0.0;
    rep.worst_gap = worst;
    std::sort(offenders.begin(), offenders.end(), [](const auto& a, const auto& b) {
        return a.path_index < b.path_index;
    });
    rep.violating = std::move(offenders);
    return rep;
}

} // namespace bt
