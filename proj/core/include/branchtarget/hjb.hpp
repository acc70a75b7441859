#pragma once

#include "branchtarget/model.hpp"
#include "branchtarget/offspring.hpp"

#include <atomic>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

namespace bt {

// Backward finite-difference grid for the label-tree variational inequality.
// nt == 0 requests the largest stable step (auto CFL).  offspring_index_cap
// == 0 derives the tree width from the offspring law (max realizable child
// index).  epsilon is extra control-matching slack on top of the grid
// resolution of the diffusion-mismatch image.
struct GridSpec {
    double x_lo = -6.0;
    double x_hi = 3.0;
    int nx = 201;
    int nt = 0;
    int tree_depth = 3;
    int offspring_index_cap = 0;
    double epsilon = 0.0;

    double dx() const { return (x_hi - x_lo) / (nx - 1); }
    std::vector<double> xs() const;

    void validate() const; // throws NumericalConfigError
};

struct CflReport {
    double dt = 0.0;
    double bound = 0.0; // dx^2 / (max sigma sigma^T + dx * max |drift|)
    bool ok = false;
    double max_diffusion_sq = 0.0;
    double max_drift = 0.0;
};

// Stability bound for the explicit scheme, scanned over grid x and controls.
CflReport cfl_check(const CoefficientModel& model, const GridSpec& grid, double dt);

// Controls whose diffusion mismatch |sigma_y(x,a) - sigma(x,a)·p| is within
// slack; indices into model.controls, ascending.  d = m = 1.
std::vector<std::size_t> kernel(const CoefficientModel& model, double x, double p, double slack);

// Signed distance of 0 to the mismatch image interval [min_a N, max_a N]:
// positive inside (distance to the complement), negative outside, 0 on the
// boundary.
double kernel_margin(const CoefficientModel& model, double x, double p);

// sup over matched controls of  target_drift(x,y,a) - drift(x,a)·p
// - 0.5·diffusion^2(x,a)·M ; -infinity when no control matches.
double hamiltonian(const CoefficientModel& model, double x, double y, double p, double M,
                   double slack);

// Smallest function >= slice whose discrete slopes lie in [slope_lo,
// slope_hi]; forward/backward clipping passes iterated to a fixed point.
// Non-finite bounds disable the corresponding side.
std::vector<double> facelift(std::vector<double> slice, double dx, double slope_lo,
                             double slope_hi);

// Label tree of all words with digits < width and generation <= depth,
// sorted by generation then lexicographically.
std::vector<Label> label_tree(int depth, unsigned width);

// Terminal slices: bottom-up over the tree,
//   slice_i = facelift(max(g_i, max over children slices)),
// leaves using facelift(g_leaf) as the truncation tail.
std::vector<std::vector<double>> terminal_condition(const std::vector<Label>& labels,
                                                    const TargetSpec& target,
                                                    const std::vector<double>& xs,
                                                    double slope_lo, double slope_hi);

struct SurfaceDiagnostics {
    double max_obstacle_violation = 0.0; // max over nodes of children-sup - v
    double max_facelift_gap = 0.0;       // max over slices of facelift(v) - v
    double max_terminal_gap = 0.0;       // terminal slices vs rebuilt condition
    CflReport cfl;
};

class ValueSurface {
  public:
    GridSpec grid;
    double horizon = 1.0;
    double slope_lo = 0.0;
    double slope_hi = 1.0;
    std::vector<Label> labels;             // generation-major order
    std::vector<std::vector<double>> data; // per label, (nt+1) x nx row-major
    SurfaceDiagnostics diagnostics;

    std::optional<std::size_t> label_index(const Label& label) const;
    // longest prefix of `label` present on the surface; nullopt when even the
    // root is absent (never happens for trees built here)
    std::optional<std::size_t> covering_index(const Label& label) const;

    bool x_in_domain(double x) const {
        return x >= grid.x_lo - 1e-12 && x <= grid.x_hi + 1e-12;
    }

    double at(std::size_t label_idx, int n, int j) const {
        return data[label_idx][static_cast<std::size_t>(n) * static_cast<std::size_t>(grid.nx) +
                               static_cast<std::size_t>(j)];
    }
    // bilinear in (t, x); t clamped to [0, horizon], x must be in domain
    double value(std::size_t label_idx, double t, double x) const;
    double root_value(double t, double x) const { return value(0, t, x); }

    // recompute invariants on the stored surface (also run at solve time)
    SurfaceDiagnostics scan_invariants(const CoefficientModel& model, const OffspringLaw& law,
                                       const TargetSpec& target) const;
};

// Explicit backward solve of the variational inequality on the truncated
// label tree: children stepped before parents at each time level; per node
// an upwind/central Euler step of the matched-control Hamiltonian where a
// control matches at grid slack, the slice envelope (facelift) after every
// step, then the max against realizable children at the same level.
// slope_cone overrides the cone derived from sigma_y/sigma over the grid.
// Throws NumericalConfigError on CFL violation or an x-dependent cone.
ValueSurface solve_vi(const CoefficientModel& model, const OffspringLaw& law,
                      const TargetSpec& target, const GridSpec& grid,
                      std::optional<std::pair<double, double>> slope_cone = std::nullopt);

// Feedback map read off a value surface: discrete slope of the particle
// label's slice (deepest covered prefix for labels past the tree), clamped
// to the cone, then the matched control maximizing the Hamiltonian
// integrand; when nothing matches, the nearest control in mismatch,
// counted in projected_evaluations.
class SurfaceControl final : public FeedbackControl {
  public:
    SurfaceControl(std::shared_ptr<const ValueSurface> surface, CoefficientModel model);

    double operator()(const Label& label, double t, std::span<const double> x,
                      double y) const override;
    std::string name() const override { return "surface-feedback"; }
    bool depends_on_y() const override;

    std::uint64_t projected_evaluations() const { return projected_.load(); }
    const ValueSurface& surface() const { return *surface_; }

  private:
    std::shared_ptr<const ValueSurface> surface_;
    CoefficientModel model_;
    mutable std::atomic<std::uint64_t> projected_{0};
};

std::shared_ptr<SurfaceControl> extract_feedback(std::shared_ptr<const ValueSurface> surface,
                                                 const CoefficientModel& model);

} // namespace bt
