#pragma once

#include "branchtarget/model.hpp"
#include "branchtarget/offspring.hpp"

#include <map>
#include <optional>
#include <string>

namespace bt {

// Split-asset hedging scenario in log coordinates: X = log price with drift
// b - c^2/2 and volatility c; Y = log wealth under a fraction a in [0,1]
// held in the asset, the rest earning r.  Each particle (asset version) i
// carries a floored put written in log space,
//     g_i(x) = log((K_i - e^x)_+ + kappa),
// with K_i = strike0 * 2^{-digit_sum(i)} unless overridden by the table,
// and g_i == 0 for labels containing a child index >= zero_index_bound.
struct FintechParams {
    double b = 0.1;
    double c = 0.2;
    double r = 0.02;
    double kappa = 0.1;
    double strike0 = 1.0;
    double horizon = 1.0;
    unsigned zero_index_bound = 8;
    int n_controls = 101; // equispaced on [0,1]
    std::map<Label, double> strike_table;
    std::optional<double> strike_bound; // default: max(strike0, table entries)

    // throws InputError on invalid signs/shapes; boundedness of the strike
    // table against a declared strike_bound is a verification check, not a
    // load-time failure (see run_checks)
    void validate() const;

    double effective_strike_bound() const;
    // largest strike in play minus the declared bound; > 0 means the closed
    // form upper bound built from strike_bound is not trustworthy
    double strike_bound_excess() const;
    double strike(const Label& label) const;

    // closed-form value bounds at time t (valid for every initial label):
    //   lower: -(((b-r)/c)^2 + r)(T-t) + log kappa
    //   upper: -r(T-t) + log(strike_bound + kappa)
    double lower_bound(double t) const;
    double upper_bound(double t) const;
};

struct Scenario {
    std::string kind; // "fintech" | "custom"
    CoefficientModel model;
    OffspringLaw law;
    TargetSpec target;
    std::optional<FintechParams> fintech;
    // admissible slope cone for the solver's slice envelope; when absent the
    // solver derives it from sigma_y/sigma over the control grid
    std::optional<std::pair<double, double>> slope_cone;
    std::string source_path;   // empty when built in memory
    std::string source_digest; // fnv-1a hex of the file bytes, when loaded
};

// build the fintech scenario (model + offspring law + target)
Scenario fintech_scenario(const FintechParams& params, OffspringLaw law);

// Load a scenario from JSON.  Two kinds:
//   {"kind":"fintech","T":..,"gamma":..,"offspring":[[k,p],..],
//    "b":..,"c":..,"r":..,"kappa":..,"strike0":..,
//    "zero_index_bound":..,"n_controls":..,
//    "strikes":{"root":..,"0":..},"strike_bound":..}
//   {"kind":"custom","T":..,"gamma":..,"offspring":[[k,p],..],
//    "control_grid":[..],
//    "coefficients":{"drift":{"c0":..,"cx":..,"ca":..},
//                    "diffusion":{...},
//                    "target_drift":{"c0":..,"cx":..,"cy":..,"ca":..,"caa":..},
//                    "target_diffusion":{...}},
//    "payoff":{"kind":"zero"|"affine"|"call_log"|"put_log", ...},
//    "slope_cone":[lo,hi]}
// Throws InputError on parse/validation failures.
Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text);

} // namespace bt
