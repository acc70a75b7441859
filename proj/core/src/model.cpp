#include "branchtarget/model.hpp"

#include "branchtarget/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bt {

void CoefficientModel::validate() const {
    if (dim_x < 1 || dim_noise < 1)
        throw InputError("model: dimensions must be >= 1");
    if (controls.empty()) throw InputError("model: empty control grid");
    if (!std::is_sorted(controls.begin(), controls.end()))
        throw InputError("model: control grid must be ascending");
    for (const double a : controls)
        if (!std::isfinite(a)) throw InputError("model: non-finite control point");
    if (!drift || !diffusion || !target_drift || !target_diffusion)
        throw InputError("model: missing coefficient callback");
}

ConstantControl::ConstantControl(double a, std::string name) : a_(a), name_(std::move(name)) {
    if (name_.empty()) {
        name_ = a == 0.0 ? "riskless" : "const:" + std::to_string(a);
    }
}

} // namespace bt
