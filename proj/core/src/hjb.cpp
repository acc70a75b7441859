#include "branchtarget/hjb.hpp"

#include "branchtarget/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace bt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_scalar(const CoefficientModel& model) {
    if (model.dim_x != 1 || model.dim_noise != 1)
        throw NumericalConfigError("solver: only d = m = 1 models are supported");
}

// coefficient tables over (x-column, control)
struct CoefTables {
    std::size_t na = 0;
    std::vector<double> lam, sig, sig2, sy; // nx * na, column-major in a

    static CoefTables build(const CoefficientModel& model, const std::vector<double>& xs) {
        CoefTables t;
        t.na = model.controls.size();
        const std::size_t nx = xs.size();
        t.lam.resize(nx * t.na);
        t.sig.resize(nx * t.na);
        t.sig2.resize(nx * t.na);
        t.sy.resize(nx * t.na);
        double l = 0.0, s = 0.0, q = 0.0;
        std::span<double> ls(&l, 1), ss(&s, 1), qs(&q, 1);
        for (std::size_t j = 0; j < nx; ++j) {
            const std::span<const double> x(&xs[j], 1);
            for (std::size_t a = 0; a < t.na; ++a) {
                model.drift(x, model.controls[a], ls);
                model.diffusion(x, model.controls[a], ss);
                model.target_diffusion(x, model.controls[a], qs);
                t.lam[j * t.na + a] = l;
                t.sig[j * t.na + a] = s;
                t.sig2[j * t.na + a] = s * s;
                t.sy[j * t.na + a] = q;
            }
        }
        return t;
    }
};

// slack at which a control grid of finite resolution is considered to match:
// half the worst adjacent spacing of the mismatch image, plus user slack
double effective_slack(double user_eps, const CoefTables& t, std::size_t j, double pmax) {
    double gap_sy = 0.0, gap_sig = 0.0;
    for (std::size_t a = 0; a + 1 < t.na; ++a) {
        gap_sy = std::max(gap_sy, std::abs(t.sy[j * t.na + a + 1] - t.sy[j * t.na + a]));
        gap_sig = std::max(gap_sig, std::abs(t.sig[j * t.na + a + 1] - t.sig[j * t.na + a]));
    }
    const double gap = gap_sy + gap_sig * pmax;
    return std::max(user_eps, 0.5 * gap * (1.0 + 1e-9) + 1e-15);
}

struct LabelTreeIndex {
    std::vector<Label> labels;
    std::map<Label, std::size_t> index;

    explicit LabelTreeIndex(std::vector<Label> ls) : labels(std::move(ls)) {
        for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;
    }

    std::vector<std::size_t> children(std::size_t i) const {
        std::vector<std::size_t> out;
        for (std::uint32_t c = 0;; ++c) {
            const auto it = index.find(labels[i].child(c));
            if (it == index.end()) break;
            out.push_back(it->second);
        }
        return out;
    }
};

} // namespace

std::vector<double> GridSpec::xs() const {
    std::vector<double> v(static_cast<std::size_t>(nx));
    for (int j = 0; j < nx; ++j)
        v[static_cast<std::size_t>(j)] = x_lo + dx() * static_cast<double>(j);
    v.back() = x_hi;
    return v;
}

void GridSpec::validate() const {
    if (!(x_lo < x_hi)) throw NumericalConfigError("grid: x_lo must be < x_hi");
    if (nx < 3) throw NumericalConfigError("grid: nx must be >= 3");
    if (nt < 0) throw NumericalConfigError("grid: nt must be >= 0");
    if (tree_depth < 0) throw NumericalConfigError("grid: tree_depth must be >= 0");
    if (offspring_index_cap < 0) throw NumericalConfigError("grid: offspring cap must be >= 0");
    if (epsilon < 0.0) throw NumericalConfigError("grid: epsilon must be >= 0");
}

CflReport cfl_check(const CoefficientModel& model, const GridSpec& grid, double dt) {
    require_scalar(model);
    const std::vector<double> xs = grid.xs();
    const CoefTables t = CoefTables::build(model, xs);
    CflReport rep;
    rep.dt = dt;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        for (std::size_t a = 0; a < t.na; ++a) {
            rep.max_diffusion_sq = std::max(rep.max_diffusion_sq, t.sig2[j * t.na + a]);
            rep.max_drift = std::max(rep.max_drift, std::abs(t.lam[j * t.na + a]));
        }
    }
    const double dx = grid.dx();
    const double denom = rep.max_diffusion_sq + dx * rep.max_drift;
    rep.bound = denom > 0.0 ? dx * dx / denom : kInf;
    rep.ok = dt <= rep.bound * (1.0 + 1e-12);
    return rep;
}

std::vector<std::size_t> kernel(const CoefficientModel& model, double x, double p, double slack) {
    require_scalar(model);
    std::vector<std::size_t> out;
    const std::span<const double> xv(&x, 1);
    double s = 0.0, q = 0.0;
    std::span<double> ss(&s, 1), qs(&q, 1);
    for (std::size_t a = 0; a < model.controls.size(); ++a) {
        model.diffusion(xv, model.controls[a], ss);
        model.target_diffusion(xv, model.controls[a], qs);
        if (std::abs(q - s * p) <= slack + 1e-15) out.push_back(a);
    }
    return out;
}

double kernel_margin(const CoefficientModel& model, double x, double p) {
    require_scalar(model);
    const std::span<const double> xv(&x, 1);
    double s = 0.0, q = 0.0;
    std::span<double> ss(&s, 1), qs(&q, 1);
    double mn = kInf, mx = -kInf;
    for (const double a : model.controls) {
        model.diffusion(xv, a, ss);
        model.target_diffusion(xv, a, qs);
        const double n = q - s * p;
        mn = std::min(mn, n);
        mx = std::max(mx, n);
    }
    if (mn <= 0.0 && 0.0 <= mx) return std::min(-mn, mx); // inside: distance to complement
    return mn > 0.0 ? -mn : mx;                           // outside: minus distance to the image
}

double hamiltonian(const CoefficientModel& model, double x, double y, double p, double M,
                   double slack) {
    require_scalar(model);
    const std::vector<std::size_t> matched = kernel(model, x, p, slack);
    if (matched.empty()) return -kInf;
    const std::span<const double> xv(&x, 1);
    double l = 0.0, s = 0.0;
    std::span<double> ls(&l, 1), ss(&s, 1);
    double best = -kInf;
    for (const std::size_t a : matched) {
        const double av = model.controls[a];
        model.drift(xv, av, ls);
        model.diffusion(xv, av, ss);
        const double q = model.target_drift(xv, y, av) - l * p - 0.5 * s * s * M;
        if (q > best) best = q;
    }
    return best;
}

std::vector<double> facelift(std::vector<double> slice, double dx, double slope_lo,
                             double slope_hi) {
    if (slope_lo > slope_hi)
        throw NumericalConfigError("facelift: slope_lo must be <= slope_hi");
    if (!(dx > 0.0)) throw NumericalConfigError("facelift: dx must be > 0");
    const bool do_fwd = std::isfinite(slope_lo);
    const bool do_bwd = std::isfinite(slope_hi);
    const std::size_t n = slice.size();
    if (n < 2 || (!do_fwd && !do_bwd)) return slice;
    for (int pass = 0; pass < 64; ++pass) {
        bool changed = false;
        if (do_fwd) {
            for (std::size_t j = 1; j < n; ++j) {
                const double c = slice[j - 1] + slope_lo * dx;
                if (c > slice[j]) {
                    slice[j] = c;
                    changed = true;
                }
            }
        }
        if (do_bwd) {
            for (std::size_t j = n - 1; j-- > 0;) {
                const double c = slice[j + 1] - slope_hi * dx;
                if (c > slice[j]) {
                    slice[j] = c;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    return slice;
}

std::vector<Label> label_tree(int depth, unsigned width) {
    std::vector<Label> labels{Label::root()};
    std::size_t level_begin = 0;
    for (int g = 0; g < depth; ++g) {
        const std::size_t level_end = labels.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (unsigned c = 0; c < width; ++c) labels.push_back(labels[i].child(c));
        level_begin = level_end;
        if (level_begin == labels.size()) break; // width 0
    }
    return labels;
}

std::vector<std::vector<double>> terminal_condition(const std::vector<Label>& labels,
                                                    const TargetSpec& target,
                                                    const std::vector<double>& xs,
                                                    double slope_lo, double slope_hi) {
    if (!target.payoff) throw InputError("terminal condition: missing payoff");
    const LabelTreeIndex tree(labels);
    const double dx = xs.size() > 1 ? xs[1] - xs[0] : 1.0;
    std::vector<std::vector<double>> slices(labels.size());
    for (std::size_t i = labels.size(); i-- > 0;) {
        std::vector<double> s(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j)
            s[j] = target.payoff(labels[i], std::span<const double>(&xs[j], 1));
        for (const std::size_t c : tree.children(i))
            for (std::size_t j = 0; j < xs.size(); ++j) s[j] = std::max(s[j], slices[c][j]);
        slices[i] = facelift(std::move(s), dx, slope_lo, slope_hi);
    }
    return slices;
}

namespace {

// admissible slope cone from the hull of sigma_y/sigma over the control
// grid, checked for x-independence at a few sample points
std::pair<double, double> derive_cone(const CoefficientModel& model, const GridSpec& grid) {
    std::pair<double, double> ref{kInf, -kInf};
    bool any = false, unconstrained = false;
    for (int k = 0; k < 5; ++k) {
        const double x = grid.x_lo + (grid.x_hi - grid.x_lo) * k / 4.0;
        const std::span<const double> xv(&x, 1);
        double s = 0.0, q = 0.0;
        std::span<double> ss(&s, 1), qs(&q, 1);
        double lo = kInf, hi = -kInf;
        bool found = false, all_zero = true;
        for (const double a : model.controls) {
            model.diffusion(xv, a, ss);
            model.target_diffusion(xv, a, qs);
            if (std::abs(s) > 1e-14) {
                const double ratio = q / s;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                found = true;
                all_zero = false;
            } else if (std::abs(q) > 1e-14) {
                all_zero = false;
            }
        }
        if (!found) {
            if (all_zero) {
                unconstrained = true;
                continue;
            }
            throw NumericalConfigError(
                "solver: diffusion mismatch can never vanish (sigma == 0, sigma_y != 0)");
        }
        if (!any) {
            ref = {lo, hi};
            any = true;
        } else if (std::abs(lo - ref.first) > 1e-9 * (1.0 + std::abs(ref.first)) ||
                   std::abs(hi - ref.second) > 1e-9 * (1.0 + std::abs(ref.second))) {
            throw NumericalConfigError(
                "solver: admissible slope cone varies with x; supply slope_cone explicitly");
        }
    }
    if (!any && unconstrained) return {-kInf, kInf};
    return ref;
}

} // namespace

std::optional<std::size_t> ValueSurface::label_index(const Label& label) const {
    const auto cmp = [](const Label& a, const Label& b) {
        if (a.generation() != b.generation()) return a.generation() < b.generation();
        return a < b;
    };
    const auto it = std::lower_bound(labels.begin(), labels.end(), label, cmp);
    if (it != labels.end() && *it == label)
        return static_cast<std::size_t>(it - labels.begin());
    return std::nullopt;
}

std::optional<std::size_t> ValueSurface::covering_index(const Label& label) const {
    std::vector<std::uint32_t> digits = label.digits();
    while (true) {
        if (const auto idx = label_index(Label{digits})) return idx;
        if (digits.empty()) return std::nullopt;
        digits.pop_back();
    }
}

double ValueSurface::value(std::size_t label_idx, double t, double x) const {
    const int nt = grid.nt;
    const int nx = grid.nx;
    const double dt = horizon / nt;
    double tf = std::clamp(t / dt, 0.0, static_cast<double>(nt));
    int n0 = static_cast<int>(tf);
    if (n0 >= nt) n0 = nt - 1;
    const double wt = tf - n0;
    double jf = (x - grid.x_lo) / grid.dx();
    jf = std::clamp(jf, 0.0, static_cast<double>(nx - 1));
    int j0 = static_cast<int>(jf);
    if (j0 >= nx - 1) j0 = nx - 2;
    const double wx = jf - j0;
    const double v00 = at(label_idx, n0, j0), v01 = at(label_idx, n0, j0 + 1);
    const double v10 = at(label_idx, n0 + 1, j0), v11 = at(label_idx, n0 + 1, j0 + 1);
    return (1 - wt) * ((1 - wx) * v00 + wx * v01) + wt * ((1 - wx) * v10 + wx * v11);
}

SurfaceDiagnostics ValueSurface::scan_invariants(const CoefficientModel& model,
                                                 const OffspringLaw& law,
                                                 const TargetSpec& target) const {
    (void)model;
    (void)law;
    SurfaceDiagnostics diag;
    diag.cfl = diagnostics.cfl;
    const LabelTreeIndex tree(labels);
    const std::size_t nx = static_cast<std::size_t>(grid.nx);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto kids = tree.children(i);
        for (int n = 0; n <= grid.nt; ++n) {
            const std::size_t off = static_cast<std::size_t>(n) * nx;
            for (const std::size_t c : kids)
                for (std::size_t j = 0; j < nx; ++j)
                    diag.max_obstacle_violation = std::max(
                        diag.max_obstacle_violation, data[c][off + j] - data[i][off + j]);
            std::vector<double> slice(data[i].begin() + static_cast<std::ptrdiff_t>(off),
                                      data[i].begin() + static_cast<std::ptrdiff_t>(off + nx));
            const std::vector<double> lifted = facelift(slice, grid.dx(), slope_lo, slope_hi);
            for (std::size_t j = 0; j < nx; ++j)
                diag.max_facelift_gap = std::max(diag.max_facelift_gap, lifted[j] - slice[j]);
        }
    }
    const auto terminal = terminal_condition(labels, target, grid.xs(), slope_lo, slope_hi);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t off = static_cast<std::size_t>(grid.nt) * nx;
        for (std::size_t j = 0; j < nx; ++j)
            diag.max_terminal_gap = std::max(
                diag.max_terminal_gap, std::abs(terminal[i][j] - data[i][off + j]));
    }
    return diag;
}

ValueSurface solve_vi(const CoefficientModel& model, const OffspringLaw& law,
                      const TargetSpec& target, const GridSpec& grid,
                      std::optional<std::pair<double, double>> slope_cone) {
    model.validate();
    law.validate();
    require_scalar(model);
    grid.validate();
    if (!(target.horizon > 0.0)) throw NumericalConfigError("solver: horizon must be > 0");

    const auto cone = slope_cone ? *slope_cone : derive_cone(model, grid);
    if (cone.first > cone.second)
        throw NumericalConfigError("solver: slope cone is empty");

    GridSpec g = grid;
    const CflReport probe = cfl_check(model, g, 0.0);
    if (g.nt == 0) {
        g.nt = std::isfinite(probe.bound)
                   ? std::max(1, static_cast<int>(std::ceil(target.horizon /
                                                            (0.95 * probe.bound))))
                   : 1;
    }
    const double dt = target.horizon / g.nt;
    CflReport cfl = probe;
    cfl.dt = dt;
    cfl.ok = dt <= cfl.bound * (1.0 + 1e-12);
    if (!cfl.ok) {
        const int need = static_cast<int>(std::ceil(target.horizon / (0.95 * cfl.bound)));
        throw NumericalConfigError("solver: dt=" + std::to_string(dt) +
                                   " violates the stability bound " + std::to_string(cfl.bound) +
                                   "; use nt >= " + std::to_string(need));
    }

    const unsigned kmax = law.max_children();
    const unsigned width = g.offspring_index_cap == 0
                               ? kmax
                               : std::min<unsigned>(static_cast<unsigned>(g.offspring_index_cap),
                                                    kmax);

    ValueSurface surf;
    surf.grid = g;
    surf.horizon = target.horizon;
    surf.slope_lo = cone.first;
    surf.slope_hi = cone.second;
    surf.labels = label_tree(g.tree_depth, width);

    const LabelTreeIndex tree(surf.labels);
    const std::vector<double> xs = g.xs();
    const std::size_t nx = xs.size();
    const double dx = g.dx();
    const CoefTables tab = CoefTables::build(model, xs);
    const std::size_t na = tab.na;

    const double pmax = std::isfinite(cone.first) || std::isfinite(cone.second)
                            ? std::max(std::abs(cone.first), std::abs(cone.second))
                            : 0.0;
    std::vector<double> slack(nx);
    for (std::size_t j = 0; j < nx; ++j) slack[j] = effective_slack(g.epsilon, tab, j, pmax);

    surf.data.assign(surf.labels.size(),
                     std::vector<double>(static_cast<std::size_t>(g.nt + 1) * nx));
    const auto terminal = terminal_condition(surf.labels, target, xs, cone.first, cone.second);
    for (std::size_t i = 0; i < surf.labels.size(); ++i)
        std::copy(terminal[i].begin(), terminal[i].end(),
                  surf.data[i].begin() + static_cast<std::ptrdiff_t>(g.nt) * nx);

    const double clamp_lo = std::isfinite(cone.first) ? cone.first : -kInf;
    const double clamp_hi = std::isfinite(cone.second) ? cone.second : kInf;

    std::vector<double> cur(nx);
    for (int n = g.nt - 1; n >= 0; --n) {
        // deepest generations first so the obstacle reads finished children
        for (std::size_t i = surf.labels.size(); i-- > 0;) {
            const double* next = surf.data[i].data() + static_cast<std::size_t>(n + 1) * nx;
            for (std::size_t j = 0; j < nx; ++j) {
                const bool interior = j > 0 && j + 1 < nx;
                double p, M;
                if (interior) {
                    p = (next[j + 1] - next[j - 1]) / (2.0 * dx);
                    M = (next[j + 1] - 2.0 * next[j] + next[j - 1]) / (dx * dx);
                } else {
                    const double one_sided = j == 0 ? (next[1] - next[0]) / dx
                                                    : (next[nx - 1] - next[nx - 2]) / dx;
                    p = std::clamp(one_sided, clamp_lo, clamp_hi);
                    M = 0.0;
                }
                // matched-control scan; integrand evaluated on matches only
                double best = -kInf;
                std::size_t best_a = na;
                const std::span<const double> xv(&xs[j], 1);
                for (std::size_t a = 0; a < na; ++a) {
                    const double mismatch = std::abs(tab.sy[j * na + a] - tab.sig[j * na + a] * p);
                    if (mismatch > slack[j]) continue;
                    const double q = model.target_drift(xv, next[j], model.controls[a]) -
                                     tab.lam[j * na + a] * p - 0.5 * tab.sig2[j * na + a] * M;
                    if (q > best) {
                        best = q;
                        best_a = a;
                    }
                }
                if (best_a == na) {
                    cur[j] = next[j]; // no matched control: the envelope step rules
                    continue;
                }
                const double lam = tab.lam[j * na + best_a];
                double transport;
                if (interior) {
                    transport = lam >= 0.0 ? lam * (next[j + 1] - next[j]) / dx
                                           : lam * (next[j] - next[j - 1]) / dx;
                } else {
                    transport = lam * p;
                }
                const double ly = model.target_drift(xv, next[j], model.controls[best_a]);
                cur[j] = next[j] - dt * (ly - transport - 0.5 * tab.sig2[j * na + best_a] * M);
            }
            std::vector<double> lifted = facelift(cur, dx, cone.first, cone.second);
            for (const std::size_t c : tree.children(i)) {
                const double* child = surf.data[c].data() + static_cast<std::size_t>(n) * nx;
                for (std::size_t j = 0; j < nx; ++j)
                    lifted[j] = std::max(lifted[j], child[j]);
            }
            std::copy(lifted.begin(), lifted.end(),
                      surf.data[i].begin() + static_cast<std::ptrdiff_t>(n) * nx);
        }
    }

    surf.diagnostics.cfl = cfl;
    surf.diagnostics = surf.scan_invariants(model, law, target);
    surf.diagnostics.cfl = cfl;
    return surf;
}

SurfaceControl::SurfaceControl(std::shared_ptr<const ValueSurface> surface, CoefficientModel model)
    : surface_(std::move(surface)), model_(std::move(model)) {
    require_scalar(model_);
}

double SurfaceControl::operator()(const Label& label, double t, std::span<const double> x,
                                  double y) const {
    const ValueSurface& s = *surface_;
    const auto idx = s.covering_index(label);
    const std::size_t li = idx ? *idx : 0;
    const double xq = std::clamp(x[0], s.grid.x_lo, s.grid.x_hi);
    const double dx = s.grid.dx();
    double jf = (xq - s.grid.x_lo) / dx;
    int j0 = static_cast<int>(jf);
    if (j0 >= s.grid.nx - 1) j0 = s.grid.nx - 2;
    const double xl = s.grid.x_lo + j0 * dx;
    double p = (s.value(li, t, xl + dx) - s.value(li, t, xl)) / dx;
    p = std::clamp(p, s.slope_lo, s.slope_hi);

    const std::span<const double> xv(&xq, 1);
    double sv = 0.0, qv = 0.0, lv = 0.0;
    std::span<double> ss(&sv, 1), qs(&qv, 1), ls(&lv, 1);
    // grid-resolution slack at this x
    double gap_sy = 0.0, gap_sig = 0.0, prev_sy = 0.0, prev_sig = 0.0;
    std::vector<double> mism(model_.controls.size());
    for (std::size_t a = 0; a < model_.controls.size(); ++a) {
        model_.diffusion(xv, model_.controls[a], ss);
        model_.target_diffusion(xv, model_.controls[a], qs);
        mism[a] = std::abs(qv - sv * p);
        if (a > 0) {
            gap_sy = std::max(gap_sy, std::abs(qv - prev_sy));
            gap_sig = std::max(gap_sig, std::abs(sv - prev_sig));
        }
        prev_sy = qv;
        prev_sig = sv;
    }
    const double pmax = std::max(std::abs(s.slope_lo), std::abs(s.slope_hi));
    const double slack = std::max(s.grid.epsilon,
                                  0.5 * (gap_sy + gap_sig * (std::isfinite(pmax) ? pmax : 0.0)) *
                                          (1.0 + 1e-9) +
                                      1e-15);

    double best = -kInf;
    std::size_t best_a = model_.controls.size();
    for (std::size_t a = 0; a < model_.controls.size(); ++a) {
        if (mism[a] > slack) continue;
        model_.drift(xv, model_.controls[a], ls);
        const double q = model_.target_drift(xv, y, model_.controls[a]) - lv * p;
        if (q > best) {
            best = q;
            best_a = a;
        }
    }
    if (best_a == model_.controls.size()) {
        // nothing matches: project to the nearest control in mismatch
        best_a = static_cast<std::size_t>(
            std::min_element(mism.begin(), mism.end()) - mism.begin());
        projected_.fetch_add(1, std::memory_order_relaxed);
    }
    return model_.controls[best_a];
}

bool SurfaceControl::depends_on_y() const { return model_.target_drift_in_y; }

std::shared_ptr<SurfaceControl> extract_feedback(std::shared_ptr<const ValueSurface> surface,
                                                 const CoefficientModel& model) {
    return std::make_shared<SurfaceControl>(std::move(surface), model);
}

} // namespace bt
