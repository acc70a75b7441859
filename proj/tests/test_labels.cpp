#include "branchtarget/errors.hpp"
#include "branchtarget/label.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

using namespace bt;

TEST_SUITE("labels") {

    TEST_CASE("text round trip") {
        CHECK(Label::root().str() == "root");
        CHECK(Label::parse("root") == Label::root());
        CHECK(Label::root().is_root());

        const Label l = Label::parse("1.0.3");
        CHECK(l.digits() == std::vector<std::uint32_t>{1, 0, 3});
        CHECK(l.str() == "1.0.3");
        CHECK(l.generation() == 3);
        CHECK_FALSE(l.is_root());
        CHECK(Label::parse("7") == Label{{7}});
        CHECK(Label::parse(l.str()) == l);
    }

    TEST_CASE("malformed text is rejected") {
        CHECK_THROWS_AS(Label::parse(""), InputError);
        CHECK_THROWS_AS(Label::parse("1..2"), InputError);
        CHECK_THROWS_AS(Label::parse("1.a"), InputError);
        CHECK_THROWS_AS(Label::parse("1.2."), InputError);
        CHECK_THROWS_AS(Label::parse(".1"), InputError);
        CHECK_THROWS_AS(Label::parse("-1"), InputError);
        CHECK_THROWS_AS(Label::parse("1 2"), InputError);
    }

    TEST_CASE("children and concatenation") {
        const Label a = Label::parse("2.1");
        CHECK(a.child(4) == Label::parse("2.1.4"));
        CHECK(concat(Label::root(), a) == a);
        CHECK(concat(a, Label::root()) == a);
        const Label b = Label::parse("0.5");
        CHECK(concat(a, b) == Label::parse("2.1.0.5"));
        // associativity on a spot triple
        const Label c = Label::parse("3");
        CHECK(concat(concat(a, b), c) == concat(a, concat(b, c)));
    }

    TEST_CASE("order: lexicographic, prefixes first") {
        std::vector<Label> v{Label::parse("1"), Label::parse("0.1"), Label::root(),
                             Label::parse("0.0"), Label::parse("0"), Label::parse("0.0.2")};
        std::sort(v.begin(), v.end());
        CHECK(v[0] == Label::root());
        CHECK(v[1] == Label::parse("0"));
        CHECK(v[2] == Label::parse("0.0"));
        CHECK(v[3] == Label::parse("0.0.2"));
        CHECK(v[4] == Label::parse("0.1"));
        CHECK(v[5] == Label::parse("1"));
    }

    TEST_CASE("ancestry and common prefix") {
        const Label p = Label::parse("1.2");
        CHECK(is_ancestor(p, Label::parse("1.2.0")));
        CHECK(is_ancestor(p, p));
        CHECK_FALSE(is_ancestor(p, p, /*strict=*/true));
        CHECK(is_ancestor(Label::root(), p, /*strict=*/true));
        CHECK_FALSE(is_ancestor(Label::parse("1.3"), Label::parse("1.2.0")));
        CHECK_FALSE(is_ancestor(Label::parse("1.2.0"), p));

        CHECK(common_prefix(Label::parse("1.2.3"), Label::parse("1.2.7")) == 2);
        CHECK(common_prefix(Label::parse("4"), Label::parse("5.1")) == 0);
        CHECK(common_prefix(p, p) == 2);
    }

    TEST_CASE("genealogical distance") {
        // past the common prefix each digit contributes digit + 1
        CHECK(label_distance(Label::parse("1.2"), Label::parse("1.5")) == 9);
        CHECK(label_distance(Label::parse("0"), Label::root()) == 1);
        CHECK(label_distance(Label::parse("3.1"), Label::parse("3.1")) == 0);
        CHECK(label_norm(Label::parse("1.0")) == 3);
        CHECK(digit_sum(Label::parse("1.0")) == 1);
        CHECK(digit_sum(Label::root()) == 0);

        // metric axioms on a spot triple
        const Label a = Label::parse("1.2"), b = Label::parse("1.0.4"), c = Label::parse("2");
        CHECK(label_distance(a, b) == label_distance(b, a));
        CHECK(label_distance(a, c) <= label_distance(a, b) + label_distance(b, c));
    }

    TEST_CASE("hash separates nearby words") {
        std::set<std::uint64_t> seen;
        seen.insert(label_hash(Label::root()));
        for (std::uint32_t i = 0; i < 8; ++i) {
            seen.insert(label_hash(Label{{i}}));
            for (std::uint32_t j = 0; j < 8; ++j) seen.insert(label_hash(Label{{i, j}}));
        }
        CHECK(seen.size() == 1 + 8 + 64);
        CHECK(label_hash(Label::parse("1.0")) != label_hash(Label::parse("0.1")));
        CHECK(label_hash(Label::root()) == label_hash(Label::root()));
    }

} // TEST_SUITE
