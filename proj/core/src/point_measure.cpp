#include "branchtarget/point_measure.hpp"

#include "branchtarget/errors.hpp"

#include <algorithm>

namespace bt {

namespace {

bool label_less(const PointMeasure::Entry& e, const Label& l) { return e.label < l; }

} // namespace

void PointMeasure::insert(Label label, std::vector<double> point) {
    if (point.size() != dim_)
        throw InputError("point measure: point dimension " + std::to_string(point.size()) +
                         " != declared " + std::to_string(dim_));
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), label, label_less);
    if (it != entries_.end() && it->label == label)
        throw InputError("point measure: duplicate label " + label.str());
    // antichain check against the sorted neighbourhood is not sufficient for
    // arbitrary words, so scan; populations are small.
    for (const auto& e : entries_) {
        if (is_ancestor(e.label, label) || is_ancestor(label, e.label))
            throw InputError("point measure: labels " + e.label.str() + " and " + label.str() +
                             " are comparable (not an antichain)");
    }
    entries_.insert(it, Entry{std::move(label), std::move(point)});
}

const PointMeasure::Entry* PointMeasure::find(const Label& label) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), label, label_less);
    if (it != entries_.end() && it->label == label) return &*it;
    return nullptr;
}

void PointMeasure::branch(const Label& parent, unsigned k) {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), parent, label_less);
    if (it == entries_.end() || !(it->label == parent))
        throw InputError("point measure: branch event for dead or unknown particle " +
                         parent.str());
    const std::vector<double> point = std::move(it->point);
    entries_.erase(it);
    // children of an antichain element are incomparable to every survivor,
    // so plain sorted insertion keeps all invariants
    for (unsigned c = 0; c < k; ++c) {
        Label child = parent.child(c);
        const auto pos = std::lower_bound(entries_.begin(), entries_.end(), child, label_less);
        entries_.insert(pos, Entry{std::move(child), point});
    }
}

PointMeasure singleton(std::size_t dim, Label label, std::span<const double> point) {
    PointMeasure mu(dim);
    mu.insert(std::move(label), std::vector<double>(point.begin(), point.end()));
    return mu;
}

} // namespace bt
