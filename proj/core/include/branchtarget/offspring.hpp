#pragma once

#include "branchtarget/rng.hpp"

#include <utility>
#include <vector>

namespace bt {

// Branching mechanism: particles die at rate gamma and are replaced by k
// children with probability pmf[k].
struct OffspringLaw {
    double gamma = 0.0;
    std::vector<std::pair<unsigned, double>> pmf; // (k, p_k), p_k >= 0, sum == 1

    // throws InputError: gamma < 0, negative weight, duplicate k,
    // or |sum p - 1| > 1e-12
    void validate() const;

    double mean() const;           // mean offspring count M
    unsigned max_children() const; // largest k with p_k > 0
    // one past the largest realizable child index (max_children() + 1);
    // recorded in reports, not used as an obstacle range
    unsigned child_index_bound() const { return max_children() + 1; }

    unsigned sample(CounterRng& rng) const { return rng.sample_pmf(pmf); }
};

struct OffspringStats {
    double mean;
    unsigned max_children;
    unsigned child_index_bound;
};

OffspringStats offspring_stats(const OffspringLaw& law);

} // namespace bt
