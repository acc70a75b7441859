#pragma once

#include "branchtarget/label.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bt {

// Controlled coefficient set for the particle state X (dim_x) driven by
// dim_noise Brownian components, plus the scalar tracked process Y.
// Controls are points of a finite ascending grid of reals.
struct CoefficientModel {
    int dim_x = 1;
    int dim_noise = 1;
    std::vector<double> controls;

    // declared regularity, recorded in run manifests
    double lipschitz = 0.0;
    double control_modulus = 1.0;

    // set when target_drift reads y; enables/disables the exact additive
    // fast path in value estimation
    bool target_drift_in_y = false;

    // drift(x, a) -> out[dim_x]
    std::function<void(std::span<const double>, double, std::span<double>)> drift;
    // diffusion(x, a) -> out[dim_x * dim_noise], row-major
    std::function<void(std::span<const double>, double, std::span<double>)> diffusion;
    // target_drift(x, y, a) -> scalar
    std::function<double(std::span<const double>, double, double)> target_drift;
    // target_diffusion(x, a) -> out[dim_noise]
    std::function<void(std::span<const double>, double, std::span<double>)> target_diffusion;

    // throws InputError on missing callbacks, empty/unsorted control grid,
    // or nonpositive dimensions
    void validate() const;
};

// Terminal requirement: every particle alive at the horizon must satisfy
// Y >= payoff(label, X).  A payoff of -infinity never binds.
struct TargetSpec {
    double horizon = 1.0;
    std::function<double(const Label&, std::span<const double>)> payoff;
};

// Per-label feedback map a = alpha(label, t, x, y).  All shipped controls
// ignore y, which is what makes common-random-number comparisons across
// initial y monotone path by path.
class FeedbackControl {
  public:
    virtual ~FeedbackControl() = default;
    virtual double operator()(const Label& label, double t, std::span<const double> x,
                              double y) const = 0;
    virtual std::string name() const = 0;
    // whether the map reads its y argument; value estimation may only use
    // the additive fast path when it does not
    virtual bool depends_on_y() const { return true; }
};

class ConstantControl final : public FeedbackControl {
  public:
    explicit ConstantControl(double a, std::string name = "");
    double operator()(const Label&, double, std::span<const double>, double) const override {
        return a_;
    }
    std::string name() const override { return name_; }
    bool depends_on_y() const override { return false; }

  private:
    double a_;
    std::string name_;
};

using ControlFamily = std::vector<std::shared_ptr<const FeedbackControl>>;

} // namespace bt
