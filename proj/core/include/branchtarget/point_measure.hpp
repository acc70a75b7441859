#pragma once

#include "branchtarget/label.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bt {

// Finite point configuration labelled by genealogy words.  Invariants held
// at all times:
//   - labels are pairwise distinct and form an antichain under the
//     prefix order (no particle is an ancestor of another),
//   - every point has the declared dimension,
//   - entries are kept sorted lexicographically by label.
// The empty configuration is first-class (an extinct population).
class PointMeasure {
  public:
    struct Entry {
        Label label;
        std::vector<double> point;
        bool operator==(const Entry&) const = default;
    };

    explicit PointMeasure(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<Entry>& entries() const { return entries_; }

    // throws InputError on dimension mismatch, duplicate label, or an
    // ancestry clash with an existing entry
    void insert(Label label, std::vector<double> point);

    // nullptr when absent
    const Entry* find(const Label& label) const;

    // Replace `parent` by `k` children parent·0 … parent·(k-1), each carrying
    // the parent's point.  k == 0 removes the particle (extinction of the
    // line).  Throws InputError when the parent is not alive — an
    // inconsistent event stream.
    void branch(const Label& parent, unsigned k);

    bool operator==(const PointMeasure&) const = default;

  private:
    std::size_t dim_;
    std::vector<Entry> entries_;
};

// convenience: single particle at a point
PointMeasure singleton(std::size_t dim, Label label, std::span<const double> point);

} // namespace bt
