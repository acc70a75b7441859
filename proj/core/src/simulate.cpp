#include "branchtarget/simulate.hpp"

#include "branchtarget/errors.hpp"
#include "branchtarget/parallel.hpp"
#include "branchtarget/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bt {

namespace {

constexpr double kTimeTol = 1e-12;

struct LiveParticle {
    Label label;
    std::vector<double> x;
    double y;
    double death;
    CounterRng gauss;
};

LiveParticle make_particle(Label label, std::vector<double> x, double y, double birth,
                           const OffspringLaw& law, const SimConfig& cfg) {
    const std::uint64_t lh = label_hash(label);
    CounterRng life(cfg.seed, stream_id(cfg.path_index, lh, StreamPurpose::lifetime));
    CounterRng gauss(cfg.seed, stream_id(cfg.path_index, lh, StreamPurpose::gauss));
    const double death = birth + life.exponential(law.gamma);
    return LiveParticle{std::move(label), std::move(x), y, death, gauss};
}

PointMeasure snapshot(const std::vector<LiveParticle>& alive, std::size_t dim_x) {
    PointMeasure mu(dim_x + 1);
    for (const auto& p : alive) {
        std::vector<double> point(p.x);
        point.push_back(p.y);
        mu.insert(p.label, std::move(point));
    }
    return mu;
}

} // namespace

const PointMeasure* PopulationPath::state_at(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= kTimeTol) return &states[i];
    return nullptr;
}

PopulationPath simulate(double t0, const PointMeasure& initial, const CoefficientModel& model,
                        const OffspringLaw& law, const FeedbackControl& control,
                        const SimConfig& cfg) {
    model.validate();
    law.validate();
    const std::size_t d = static_cast<std::size_t>(model.dim_x);
    const std::size_t m = static_cast<std::size_t>(model.dim_noise);
    if (initial.dim() != d + 1)
        throw InputError("simulate: initial measure must have dim_x + 1 coordinates");
    if (!(cfg.dt > 0.0)) throw InputError("simulate: dt must be > 0");
    const double T = cfg.horizon;
    if (t0 > T + kTimeTol) throw InputError("simulate: t0 past the horizon");
    if (initial.size() > cfg.population_cap)
        throw ExplosionError("simulate: initial population exceeds the cap");

    PopulationPath path;
    path.t0 = t0;
    path.horizon = T;

    std::vector<LiveParticle> alive;
    alive.reserve(initial.size());
    for (const auto& e : initial.entries()) {
        std::vector<double> x(e.point.begin(), e.point.begin() + static_cast<std::ptrdiff_t>(d));
        alive.push_back(make_particle(e.label, std::move(x), e.point[d], t0, law, cfg));
    }
    path.peak_population = alive.size();

    std::vector<double> snaps = cfg.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    std::size_t snap_idx = 0;
    auto skip_past_snaps = [&](double t) {
        while (snap_idx < snaps.size() && snaps[snap_idx] <= t + kTimeTol) ++snap_idx;
    };

    path.times.push_back(t0);
    path.states.push_back(snapshot(alive, d));
    skip_past_snaps(t0);

    if (T - t0 <= kTimeTol) return path;

    // scratch buffers shared across particles within this (single) path
    std::vector<double> lam(d), sig(d * m), sy(m), z(m), xs(d);

    double t = t0;
    std::uint64_t k_grid = 1;
    while (t < T - kTimeTol) {
        const double next_grid = std::min(t0 + static_cast<double>(k_grid) * cfg.dt, T);
        double t_event = std::numeric_limits<double>::infinity();
        for (const auto& p : alive) t_event = std::min(t_event, p.death);
        const double next_snap = snap_idx < snaps.size()
                                     ? snaps[snap_idx]
                                     : std::numeric_limits<double>::infinity();
        double stop = std::min({next_grid, t_event, next_snap, T});
        if (stop <= t + kTimeTol) stop = std::min(t + cfg.dt, T); // degenerate guard

        const double h = stop - t;
        if (h > 0.0) {
            const double sh = std::sqrt(h);
            for (auto& p : alive) {
                const double a = control(p.label, t, p.x, p.y);
                model.drift(p.x, a, lam);
                model.diffusion(p.x, a, sig);
                const double ly = model.target_drift(p.x, p.y, a);
                model.target_diffusion(p.x, a, sy);
                for (std::size_t q = 0; q < m; ++q) z[q] = p.gauss.normal();
                for (std::size_t i = 0; i < d; ++i) {
                    double diff = 0.0;
                    for (std::size_t q = 0; q < m; ++q) diff += sig[i * m + q] * z[q];
                    xs[i] = p.x[i] + lam[i] * h + diff * sh;
                }
                double ydiff = 0.0;
                for (std::size_t q = 0; q < m; ++q) ydiff += sy[q] * z[q];
                p.y += ly * h + ydiff * sh;
                std::copy(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(d), p.x.begin());
            }
        }

        // resolve branch events landing exactly at this stop (label order)
        bool branched = false;
        for (std::size_t i = 0; i < alive.size();) {
            if (alive[i].death <= stop + kTimeTol) {
                LiveParticle parent = std::move(alive[i]);
                alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(i));
                CounterRng off(cfg.seed, stream_id(cfg.path_index, label_hash(parent.label),
                                                   StreamPurpose::offspring));
                const unsigned k = law.sample(off);
                path.events.push_back(PopulationEvent{stop, parent.label, k});
                for (unsigned c = 0; c < k; ++c) {
                    LiveParticle child = make_particle(parent.label.child(c), parent.x, parent.y,
                                                       stop, law, cfg);
                    const auto pos = std::lower_bound(
                        alive.begin(), alive.end(), child.label,
                        [](const LiveParticle& lp, const Label& l) { return lp.label < l; });
                    alive.insert(pos, std::move(child));
                }
                branched = true;
                if (alive.size() > cfg.population_cap)
                    throw ExplosionError("simulate: population exceeded cap " +
                                         std::to_string(cfg.population_cap) + " at t=" +
                                         std::to_string(stop));
                // restart the scan: indices shifted
                i = 0;
            } else {
                ++i;
            }
        }
        if (branched) path.peak_population = std::max(path.peak_population, alive.size());

        const bool is_snap =
            snap_idx < snaps.size() && std::abs(snaps[snap_idx] - stop) <= kTimeTol;
        const bool is_terminal = stop >= T - kTimeTol;
        if (cfg.record || is_snap || is_terminal) {
            path.times.push_back(stop);
            path.states.push_back(snapshot(alive, d));
        }
        skip_past_snaps(stop);
        while (t0 + static_cast<double>(k_grid) * cfg.dt <= stop + kTimeTol) ++k_grid;
        t = stop;
    }
    return path;
}

PopulationPath restart(const PopulationPath& path, double theta, const CoefficientModel& model,
                       const OffspringLaw& law, const FeedbackControl& control, SimConfig cfg) {
    const PointMeasure* state = path.state_at(theta);
    if (!state)
        throw InputError("restart: t=" + std::to_string(theta) + " is not a recorded time");
    return simulate(theta, *state, model, law, control, cfg);
}

GrowthReport population_growth_report(double t0, const PointMeasure& initial,
                                      const CoefficientModel& model, const OffspringLaw& law,
                                      const FeedbackControl& control, const SimConfig& base,
                                      std::size_t n_paths, int threads) {
    if (n_paths == 0) throw InputError("growth report: need at least one path");
    std::vector<double> peaks(n_paths, 0.0);
    parallel_for(n_paths, threads, [&](std::size_t j) {
        SimConfig cfg = base;
        cfg.path_index = base.path_index + j;
        cfg.record = false;
        cfg.snapshot_times.clear();
        peaks[j] = static_cast<double>(
            simulate(t0, initial, model, law, control, cfg).peak_population);
    });

    GrowthReport rep;
    rep.n_paths = n_paths;
    double sum = 0.0, max = 0.0;
    for (const double p : peaks) {
        sum += p;
        max = std::max(max, p);
    }
    rep.mean_peak = sum / static_cast<double>(n_paths);
    double ss = 0.0;
    for (const double p : peaks) ss += (p - rep.mean_peak) * (p - rep.mean_peak);
    rep.se_peak = n_paths > 1 ? std::sqrt(ss / (static_cast<double>(n_paths) *
                                                static_cast<double>(n_paths - 1)))
                              : 0.0;
    rep.max_peak = max;
    rep.bound = static_cast<double>(initial.size()) *
                std::exp(law.gamma * law.mean() * (base.horizon - t0));
    rep.within_bound = rep.mean_peak <= rep.bound + 3.0 * rep.se_peak + 1e-12;
    return rep;
}

} // namespace bt
