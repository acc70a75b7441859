#pragma once

#include "branchtarget/model.hpp"
#include "branchtarget/offspring.hpp"
#include "branchtarget/point_measure.hpp"

#include <cstdint>
#include <vector>

namespace bt {

struct SimConfig {
    double horizon = 1.0;    // T
    double dt = 1.0 / 256.0; // Euler step; the time grid is refined so that
                             // every branch time is hit exactly
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    bool record = false;                  // snapshot the population every step
    std::vector<double> snapshot_times{}; // extra recorded times (exact stops)
    std::size_t population_cap = 1'000'000;
};

struct PopulationEvent {
    double time;
    Label parent;
    unsigned offspring; // 0 = extinction of the line
};

// One simulated genealogy.  States live in R^{d+1}: the particle state X
// followed by the tracked scalar Y.  `times`/`states` always contain the
// initial and terminal configurations; with cfg.record every Euler stop is
// kept.
struct PopulationPath {
    double t0 = 0.0;
    double horizon = 1.0;
    std::vector<PopulationEvent> events;
    std::vector<double> times;
    std::vector<PointMeasure> states;
    std::size_t peak_population = 0; // sup over [t0, T] of the alive count

    const PointMeasure& terminal() const { return states.back(); }
    // exact recorded-time lookup (tolerance 1e-12); nullptr when absent
    const PointMeasure* state_at(double t) const;
};

// Event-driven Euler simulation of the controlled branching population.
//   - every particle consumes its own counter-based substreams keyed by
//     (seed, path_index, label, purpose): lifetimes, offspring counts and
//     Gaussian increments are independent across particles, and adding
//     particles never shifts anyone else's draws;
//   - children inherit the parent's (x, y) at the branch time exactly;
//   - X and Y share the same Brownian increments within a particle.
// Identical (t0, initial, cfg) produce bit-identical paths.
// Throws InputError on bad configuration, ExplosionError past the cap.
PopulationPath simulate(double t0, const PointMeasure& initial, const CoefficientModel& model,
                        const OffspringLaw& law, const FeedbackControl& control,
                        const SimConfig& cfg);

// Continue from the configuration recorded at time theta with fresh
// randomness (cfg.seed/path_index name the new draw) until cfg.horizon.
// Theta must be a recorded time of `path`.
PopulationPath restart(const PopulationPath& path, double theta, const CoefficientModel& model,
                       const OffspringLaw& law, const FeedbackControl& control, SimConfig cfg);

struct GrowthReport {
    std::size_t n_paths = 0;
    double mean_peak = 0.0;
    double se_peak = 0.0;
    double max_peak = 0.0;
    double bound = 0.0; // |V_0| * exp(gamma * M * (T - t0))
    bool within_bound = false;
};

// Monte Carlo check of the expected-supremum population bound.
GrowthReport population_growth_report(double t0, const PointMeasure& initial,
                                      const CoefficientModel& model, const OffspringLaw& law,
                                      const FeedbackControl& control, const SimConfig& base,
                                      std::size_t n_paths, int threads = 1);

} // namespace bt
