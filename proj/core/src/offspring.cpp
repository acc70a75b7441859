#include "branchtarget/offspring.hpp"

#include "branchtarget/errors.hpp"

#include <cmath>
#include <set>

namespace bt {

void OffspringLaw::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw InputError("offspring law: gamma must be finite and >= 0");
    if (pmf.empty()) throw InputError("offspring law: empty pmf");
    double sum = 0.0;
    std::set<unsigned> seen;
    for (const auto& [k, p] : pmf) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw InputError("offspring law: p_" + std::to_string(k) + " must be >= 0");
        if (!seen.insert(k).second)
            throw InputError("offspring law: duplicate entry for k=" + std::to_string(k));
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw InputError("offspring law: probabilities sum to " + std::to_string(sum) +
                         ", expected 1");
}

double OffspringLaw::mean() const {
    double m = 0.0;
    for (const auto& [k, p] : pmf) m += static_cast<double>(k) * p;
    return m;
}

unsigned OffspringLaw::max_children() const {
    unsigned kmax = 0;
    for (const auto& [k, p] : pmf)
        if (p > 0.0 && k > kmax) kmax = k;
    return kmax;
}

OffspringStats offspring_stats(const OffspringLaw& law) {
    law.validate();
    return OffspringStats{law.mean(), law.max_children(), law.child_index_bound()};
}

} // namespace bt
