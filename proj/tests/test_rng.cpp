#include "branchtarget/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

using namespace bt;

TEST_SUITE("rng") {

    TEST_CASE("a stream is a pure function of (seed, stream, n)") {
        CounterRng a(42, 7);
        std::vector<std::uint64_t> first;
        for (int i = 0; i < 16; ++i) first.push_back(a.next_u64());

        // interleaving an unrelated stream never perturbs the draws
        CounterRng b(42, 7);
        CounterRng noise(42, 8);
        for (int i = 0; i < 16; ++i) {
            noise.next_u64();
            CHECK(b.next_u64() == first[static_cast<std::size_t>(i)]);
            noise.normal();
        }
    }

    TEST_CASE("seed and stream both separate sequences") {
        CounterRng a(1, 0), b(2, 0), c(1, 1);
        int differs_seed = 0, differs_stream = 0;
        for (int i = 0; i < 8; ++i) {
            const std::uint64_t va = a.next_u64();
            if (va != b.next_u64()) ++differs_seed;
            if (va != c.next_u64()) ++differs_stream;
        }
        CHECK(differs_seed == 8);
        CHECK(differs_stream == 8);
    }

    TEST_CASE("uniforms live strictly inside (0,1)") {
        CounterRng r(3, 3);
        double mean = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            const double u = r.uniform01();
            CHECK(u > 0.0);
            CHECK(u < 1.0);
            mean += u;
        }
        mean /= n;
        CHECK(std::abs(mean - 0.5) < 0.01);
    }

    TEST_CASE("normal moments") {
        CounterRng r(5, 11);
        const int n = 40000;
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double z = r.normal();
            s1 += z;
            s2 += z * z;
        }
        const double mean = s1 / n;
        const double var = s2 / n - mean * mean;
        CHECK(std::abs(mean) < 0.02);
        CHECK(std::abs(var - 1.0) < 0.03);
    }

    TEST_CASE("exponential rate and the rate-zero convention") {
        CounterRng r(9, 2);
        const int n = 30000;
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            const double e = r.exponential(2.0);
            CHECK(e >= 0.0);
            mean += e;
        }
        mean /= n;
        CHECK(std::abs(mean - 0.5) < 0.02);

        CHECK(r.exponential(0.0) == std::numeric_limits<double>::infinity());
    }

    TEST_CASE("pmf sampling matches probabilities") {
        const std::vector<std::pair<unsigned, double>> half{{0u, 0.5}, {2u, 0.5}};
        CounterRng r(13, 4);
        int twos = 0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            const unsigned k = r.sample_pmf(half);
            CHECK((k == 0 || k == 2));
            if (k == 2) ++twos;
        }
        CHECK(std::abs(twos / static_cast<double>(n) - 0.5) < 0.02);

        const std::vector<std::pair<unsigned, double>> sure{{3u, 1.0}};
        for (int i = 0; i < 100; ++i) CHECK(r.sample_pmf(sure) == 3);
    }

    TEST_CASE("stream ids separate purposes and paths") {
        std::set<std::uint64_t> ids;
        for (std::uint64_t path = 0; path < 4; ++path)
            for (const auto p : {StreamPurpose::lifetime, StreamPurpose::offspring,
                                 StreamPurpose::gauss, StreamPurpose::generic})
                ids.insert(stream_id(path, 0x1234, p));
        CHECK(ids.size() == 16);
        CHECK(stream_id(0, 1, StreamPurpose::gauss) == stream_id(0, 1, StreamPurpose::gauss));
    }

} // TEST_SUITE
