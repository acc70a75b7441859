#pragma once

#include "branchtarget/hjb.hpp"
#include "branchtarget/simulate.hpp"

#include <cstddef>
#include <span>

namespace bt {

// worst terminal slack min_i (Y_T^i - g_i(X_T^i)); +inf for an extinct
// population (nothing left to satisfy)
double terminal_margin(const PopulationPath& path, const TargetSpec& target);
bool terminal_success(const PopulationPath& path, const TargetSpec& target);

struct McRate {
    std::size_t n = 0;
    std::size_t failures = 0;
    double rate = 0.0;
    double se = 0.0; // binomial
};

// lift a configuration of particle states to (x, y) points, every particle
// starting at the same level y
PointMeasure with_level(const PointMeasure& positions, double y);

// P(some particle misses the target) under one feedback control, started
// from `positions` (x only, dim_x) with every particle at level y0
McRate failure_rate(double t0, const PointMeasure& positions, double y0,
                    const CoefficientModel& model, const OffspringLaw& law,
                    const TargetSpec& target, const FeedbackControl& control,
                    const SimConfig& base, std::size_t n_paths, int threads = 1);

struct BisectionSpec {
    double y_lo = 0.0;
    double y_hi = 1.0;
    double tol = 0.05; // final bracket half-width
    double eta = 0.01; // admissible failure probability
    std::size_t n_paths = 2000;
};

struct RateSample {
    double y = 0.0;
    std::size_t control = 0;
    double rate = 0.0;
    double se = 0.0;
};

struct ValueEstimate {
    double y_star = 0.0; // bracket midpoint
    double y_lo = 0.0;
    double y_hi = 0.0;
    int iterations = 0;
    double rate_lo = 0.0;            // best failure rate across controls at the initial y_lo
    double rate_hi = 0.0;            //   "                   "             at the initial y_hi
    std::size_t best_control_hi = 0; // index of a control passing at y_hi
    bool fast_path = false;          // additive offsets cached, one sweep of sims
    std::vector<RateSample> trace;   // every (y, control) rate evaluated
};

// Monte Carlo bisection for the smallest initial y some control takes to a
// failure rate <= eta.  The bracket must straddle: every control fails at
// y_lo, at least one passes at y_hi (InputError otherwise).  When neither
// the coefficients nor any control reads y, per-(control, path) terminal
// offsets are simulated once at y = 0 and every rate is a counting pass —
// exactly the re-simulated value, path by path, by additivity of the Euler
// scheme in the initial y.
ValueEstimate estimate_value(double t0, const PointMeasure& positions,
                             const CoefficientModel& model, const OffspringLaw& law,
                             const TargetSpec& target, const ControlFamily& controls,
                             const BisectionSpec& spec, const SimConfig& base, int threads = 1);

struct DppReport {
    double theta = 0.0;
    double y0 = 0.0;
    std::size_t n_paths = 0;
    std::size_t counted = 0;     // paths fully on the surface at theta
    std::size_t offgrid = 0;     // paths with a particle off the grid or label tree
    std::size_t violations = 0;  // counted paths with some particle short of the surface
    double violation_rate = 0.0; // violations / counted
    double offgrid_rate = 0.0;   // offgrid / n_paths
    double worst_gap = 0.0;      // most negative particle margin seen; 0 when none

    struct Violation {
        std::uint64_t path_index = 0;
        std::string label;
        double x = 0.0;
        double y = 0.0;
        double surface_value = 0.0;
    };
    std::vector<Violation> violating; // capped sample of the offending particles
};

// One-sided dynamic-programming consistency probe: start the population at
// y0 = v_root(t0, x0) + slack, run the given feedback to theta, and require
// Y_theta^i >= v_label(theta, X_theta^i) for every alive particle.  Paths
// that leave the grid or the truncated label tree are excluded from the
// judged set and reported via offgrid_rate.
DppReport dpp_check(double t0, std::span<const double> x0, const ValueSurface& surface,
                    const CoefficientModel& model, const OffspringLaw& law,
                    const FeedbackControl& control, double theta, double slack,
                    const SimConfig& base, std::size_t n_paths, int threads = 1);

} // namespace bt
