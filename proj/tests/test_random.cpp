#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "advsel/random.hpp"

using namespace advsel;

TEST_CASE("building block golden values", "[random]") {
    SECTION("splitmix64 matches the published reference sequence") {
        std::uint64_t state = 1234567;
        REQUIRE(detail::splitmix64(state) == 6457827717110365317ULL);
        REQUIRE(detail::splitmix64(state) == 3203168211198807973ULL);
        REQUIRE(detail::splitmix64(state) == 9817491932198370423ULL);
    }

    SECTION("fnv1a64 matches the published reference vectors") {
        REQUIRE(detail::fnv1a64("") == 0xcbf29ce484222325ULL);
        REQUIRE(detail::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
        REQUIRE(detail::fnv1a64("population") == 0xde4c378f5ed1ae92ULL);
    }
}

TEST_CASE("streams are deterministic and frozen", "[random]") {
    // These values pin the cross platform stream contract; they were derived
    // from an independent reimplementation of the seeding chain and the
    // xoshiro256** step.  If this test breaks, stored seeds everywhere stop
    // reproducing their runs: do not update the constants casually.
    RandomStream a(3, "x", 0);
    REQUIRE(a.next_u64() == 0x51f7ee7fe6392216ULL);
    REQUIRE(a.next_u64() == 0x8213a74360d722e9ULL);
    REQUIRE(a.next_u64() == 0x3a735414a54e6f1bULL);
    REQUIRE(a.next_u64() == 0xa09b0ff618cc1aa9ULL);

    RandomStream rep(3, "x", 1);
    REQUIRE(rep.next_u64() == 0x343f72f2528be7dbULL);

    RandomStream label(3, "y", 0);
    REQUIRE(label.next_u64() == 0x406b8ae359109783ULL);

    RandomStream other(42, "mechanism:random", 7);
    REQUIRE(other.next_u64() == 0xd9673301fd492ed7ULL);

    SECTION("identical identifiers replay the identical sequence") {
        RandomStream s1(99, "mechanism:quantile", 5);
        RandomStream s2(99, "mechanism:quantile", 5);
        for (int i = 0; i < 100; ++i) REQUIRE(s1.next_u64() == s2.next_u64());
    }

    SECTION("any identifier component changes the stream") {
        RandomStream base(7, "calibrate:10", 2);
        RandomStream master(8, "calibrate:10", 2);
        RandomStream lbl(7, "calibrate:11", 2);
        RandomStream rp(7, "calibrate:10", 3);
        std::uint64_t b = base.next_u64();
        REQUIRE(b != master.next_u64());
        REQUIRE(b != lbl.next_u64());
        REQUIRE(b != rp.next_u64());
    }
}

TEST_CASE("next_below is exact and in range", "[random]") {
    RandomStream rng(11, "test", 0);

    SECTION("zero bound throws") {
        REQUIRE_THROWS_AS(rng.next_below(0), std::invalid_argument);
    }

    SECTION("bound one always returns zero") {
        for (int i = 0; i < 20; ++i) REQUIRE(rng.next_below(1) == 0);
    }

    SECTION("values stay below the bound") {
        for (std::uint64_t bound : {2ULL, 3ULL, 7ULL, 10ULL, 1000ULL}) {
            for (int i = 0; i < 500; ++i) REQUIRE(rng.next_below(bound) < bound);
        }
    }

    SECTION("rejection keeps small bounds unbiased") {
        // Chi-square style sanity check at bound 3: each bucket expects
        // 10000/3, tolerate five sigma.
        const int draws = 10000;
        int counts[3] = {0, 0, 0};
        for (int i = 0; i < draws; ++i) ++counts[rng.next_below(3)];
        double expect = draws / 3.0;
        double sigma = std::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
        for (int b = 0; b < 3; ++b) {
            REQUIRE(std::abs(counts[b] - expect) < 5.0 * sigma);
        }
    }
}

TEST_CASE("unit and normal draws have the advertised shape", "[random]") {
    RandomStream rng(13, "test", 0);

    SECTION("next_unit lies in [0, 1)") {
        for (int i = 0; i < 5000; ++i) {
            double u = rng.next_unit();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
        }
    }

    SECTION("next_normal is finite with roughly standard moments") {
        const int draws = 20000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < draws; ++i) {
            double z = rng.next_normal();
            REQUIRE(std::isfinite(z));
            sum += z;
            sum2 += z * z;
        }
        double mean = sum / draws;
        double var = sum2 / draws - mean * mean;
        // Standard error of the mean is 1/sqrt(draws) ~ 0.007; allow 5 sigma.
        REQUIRE(std::abs(mean) < 0.036);
        REQUIRE(std::abs(var - 1.0) < 0.06);
    }

    SECTION("next_normal consumes exactly two uniforms") {
        RandomStream s1(17, "test", 0);
        RandomStream s2(17, "test", 0);
        s1.next_normal();
        s2.next_u64();
        s2.next_u64();
        REQUIRE(s1.next_u64() == s2.next_u64());
    }
}

TEST_CASE("scripted sources can drive deterministic tests", "[random]") {
    // The virtual next_below hook exists precisely so tests of randomized
    // mechanisms can feed exact draw sequences.
    struct Scripted final : RandomSource {
        std::vector<std::uint64_t> draws;
        std::size_t at = 0;
        std::uint64_t next_u64() override { return 0; }
        std::uint64_t next_below(std::uint64_t bound) override {
            REQUIRE(at < draws.size());
            std::uint64_t v = draws[at++];
            REQUIRE(v < bound);
            return v;
        }
    };
    Scripted s;
    s.draws = {0, 2, 1};
    REQUIRE(s.next_below(5) == 0);
    REQUIRE(s.next_below(5) == 2);
    REQUIRE(s.next_below(2) == 1);
}
