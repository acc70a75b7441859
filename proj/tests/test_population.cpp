#include "branchtarget/errors.hpp"
#include "branchtarget/point_measure.hpp"

#include <doctest.h>

#include <vector>

using namespace bt;

namespace {

std::vector<Label> labels_of(const PointMeasure& m) {
    std::vector<Label> v;
    for (const auto& e : m.entries()) v.push_back(e.label);
    return v;
}

} // namespace

TEST_SUITE("population") {

    TEST_CASE("singleton and lookup") {
        const double pt[] = {0.5, -1.0};
        const PointMeasure m = singleton(2, Label::parse("1.2"), pt);
        CHECK(m.size() == 1);
        CHECK(m.dim() == 2);
        REQUIRE(m.find(Label::parse("1.2")) != nullptr);
        CHECK(m.find(Label::parse("1.2"))->point == std::vector<double>{0.5, -1.0});
        CHECK(m.find(Label::parse("1.3")) == nullptr);
    }

    TEST_CASE("entries stay sorted regardless of insertion order") {
        PointMeasure m(1);
        m.insert(Label::parse("2"), {2.0});
        m.insert(Label::parse("0.1"), {0.1});
        m.insert(Label::parse("0.0"), {0.0});
        m.insert(Label::parse("1"), {1.0});
        CHECK(labels_of(m) == std::vector<Label>{Label::parse("0.0"), Label::parse("0.1"),
                                                 Label::parse("1"), Label::parse("2")});
    }

    TEST_CASE("duplicate, ancestor and dimension clashes") {
        PointMeasure m(1);
        m.insert(Label::parse("1.0"), {0.0});
        CHECK_THROWS_AS(m.insert(Label::parse("1.0"), {1.0}), InputError);
        // an ancestor of a live particle cannot also be alive, either way round
        CHECK_THROWS_AS(m.insert(Label::parse("1"), {1.0}), InputError);
        CHECK_THROWS_AS(m.insert(Label::parse("1.0.3"), {1.0}), InputError);
        CHECK_THROWS_AS(m.insert(Label::parse("2"), {1.0, 2.0}), InputError);
        // siblings and unrelated words are fine
        m.insert(Label::parse("1.1"), {1.0});
        m.insert(Label::parse("0"), {-1.0});
        CHECK(m.size() == 3);
    }

    TEST_CASE("branch replaces the parent by its children") {
        PointMeasure m(2);
        m.insert(Label::root(), {0.25, 1.5});
        m.branch(Label::root(), 2);
        CHECK(m.size() == 2);
        CHECK(labels_of(m) == std::vector<Label>{Label::parse("0"), Label::parse("1")});
        // both children carry the parent's point
        CHECK(m.find(Label::parse("0"))->point == std::vector<double>{0.25, 1.5});
        CHECK(m.find(Label::parse("1"))->point == std::vector<double>{0.25, 1.5});

        m.branch(Label::parse("0"), 3);
        CHECK(m.size() == 4);
        CHECK(m.find(Label::parse("0.2")) != nullptr);

        // zero offspring: the line goes extinct
        m.branch(Label::parse("1"), 0);
        CHECK(m.find(Label::parse("1")) == nullptr);
        CHECK(m.size() == 3);
    }

    TEST_CASE("branching a dead or unknown particle is an inconsistent stream") {
        PointMeasure m(1);
        m.insert(Label::root(), {0.0});
        m.branch(Label::root(), 0);
        CHECK(m.empty());
        CHECK_THROWS_AS(m.branch(Label::root(), 2), InputError);
        CHECK_THROWS_AS(m.branch(Label::parse("5"), 1), InputError);
    }

    TEST_CASE("extinction leaves a usable empty configuration") {
        PointMeasure m(1);
        CHECK(m.empty());
        CHECK(m.entries().empty());
        m.insert(Label::parse("4"), {1.0});
        m.branch(Label::parse("4"), 0);
        CHECK(m == PointMeasure(1));
    }

} // TEST_SUITE
