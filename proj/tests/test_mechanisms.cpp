#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "advsel/core.hpp"
#include "advsel/mechanisms.hpp"
#include "advsel/random.hpp"
#include "advsel/rational.hpp"
#include "advsel/stats.hpp"

using namespace advsel;

namespace {

Population strict_population(int n) {
    std::vector<int> levels(n);
    for (int i = 0; i < n; ++i) levels[i] = i + 1;
    return population_from_levels(levels);
}

// Feeds a fixed next_below sequence to a mechanism; next_u64 is unreachable
// because every consumer draws through next_below.
struct ScriptedSource final : RandomSource {
    std::vector<std::uint64_t> draws;
    std::size_t at = 0;

    explicit ScriptedSource(std::vector<std::uint64_t> d) : draws(std::move(d)) {}

    std::uint64_t next_u64() override {
        FAIL("scripted source: unexpected raw draw");
        return 0;
    }
    std::uint64_t next_below(std::uint64_t bound) override {
        REQUIRE(at < draws.size());
        std::uint64_t v = draws[at++];
        REQUIRE(v < bound);
        return v;
    }
    bool exhausted() const { return at == draws.size(); }
};

}  // namespace

TEST_CASE("equilibrium partitions deal contiguous ranges from the cutter's far end", "[mechanisms]") {
    SECTION("Player I deals downward from the top") {
        auto blocks = equilibrium_partition(6, {1, 2}, Cutter::PlayerI);
        REQUIRE(blocks == std::vector<std::vector<int>>{{6}, {4, 5}});
    }
    SECTION("Player II deals upward from the bottom") {
        auto blocks = equilibrium_partition(6, {1, 2}, Cutter::PlayerII);
        REQUIRE(blocks == std::vector<std::vector<int>>{{1}, {2, 3}});
    }
    SECTION("the whole population can be dealt") {
        auto blocks = equilibrium_partition(9, {3, 3, 3}, Cutter::PlayerI);
        REQUIRE(blocks == std::vector<std::vector<int>>{{7, 8, 9}, {4, 5, 6}, {1, 2, 3}});
    }
    SECTION("sizes must be positive, non-decreasing, and fit") {
        REQUIRE_THROWS_AS(equilibrium_partition(6, {2, 1}, Cutter::PlayerI), std::invalid_argument);
        REQUIRE_THROWS_AS(equilibrium_partition(6, {0, 2}, Cutter::PlayerI), std::invalid_argument);
        REQUIRE_THROWS_AS(equilibrium_partition(6, {3, 4}, Cutter::PlayerI), std::invalid_argument);
        REQUIRE_THROWS_AS(equilibrium_partition(6, {}, Cutter::PlayerI), std::invalid_argument);
    }
}

TEST_CASE("cut and choose equilibrium outcomes", "[mechanisms]") {
    Population pop = strict_population(6);

    SECTION("Player I cutting, sizes (3,3): picks at n - sums + 1") {
        Outcome out = cut_and_choose_outcome(pop, {3, 3}, Cutter::PlayerI);
        REQUIRE(out.sample.positions == std::vector<int>{1, 4});
        REQUIRE(out.distribution.empty());
    }
    SECTION("Player II cutting, sizes (3,3): picks at the partial sums") {
        Outcome out = cut_and_choose_outcome(pop, {3, 3}, Cutter::PlayerII);
        REQUIRE(out.sample.positions == std::vector<int>{3, 6});
    }
    SECTION("single shortlist of two at n=3 selects the middle item") {
        Outcome out = cut_and_choose_outcome(strict_population(3), {2}, Cutter::PlayerI);
        REQUIRE(out.sample.positions == std::vector<int>{2});
    }
    SECTION("transcript lists the whole cut, then the picks") {
        Outcome out = cut_and_choose_outcome(pop, {3, 3}, Cutter::PlayerI);
        REQUIRE(out.transcript.size() == 4);
        REQUIRE(out.transcript[0].actor == "I");
        REQUIRE(out.transcript[0].message == "cut block 1: positions 4..6");
        REQUIRE(out.transcript[1].actor == "I");
        REQUIRE(out.transcript[1].message == "cut block 2: positions 1..3");
        REQUIRE(out.transcript[2].actor == "II");
        REQUIRE(out.transcript[2].message == "pick position 4 from block 1");
        REQUIRE(out.transcript[3].actor == "II");
        REQUIRE(out.transcript[3].message == "pick position 1 from block 2");
    }
    SECTION("equal blocks give the closed form distance 2m/n") {
        for (int m = 0; m <= 3; ++m) {
            for (int k = 1; (2 * m + 1) * k <= 45; ++k) {
                const int n = (2 * m + 1) * k;
                Population p = strict_population(n);
                std::vector<int> sizes(k, 2 * m + 1);
                for (Cutter cutter : {Cutter::PlayerI, Cutter::PlayerII}) {
                    Outcome out = cut_and_choose_outcome(p, sizes, cutter);
                    INFO("n=" << n << " k=" << k << " cutter " << (cutter == Cutter::PlayerI ? "I" : "II"));
                    REQUIRE(ks_stat(p, out.sample) == Rational(2 * m) / Rational(n));
                }
            }
        }
    }
    SECTION("ties: the chooser takes the lowest position of the best level") {
        // Levels 1,2,2,3,3,3 with Player II cutting {1,2,3},{4,5,6}: Player I
        // wants the top level of each block; in block one that is level 2,
        // first reached at position 2.
        Population weak = population_from_levels({1, 2, 2, 3, 3, 3});
        Outcome out = cut_and_choose_outcome(weak, {3, 3}, Cutter::PlayerII);
        REQUIRE(out.sample.positions == std::vector<int>{2, 4});
    }
}

TEST_CASE("quantile mechanism lands on the evenly spread positions", "[mechanisms]") {
    SECTION("n=6, k=2, m=1: positions {2,5} from either side") {
        Population pop = strict_population(6);
        REQUIRE(quantile_outcome(pop, 2, 1, Cutter::PlayerI).sample.positions ==
                std::vector<int>{2, 5});
        REQUIRE(quantile_outcome(pop, 2, 1, Cutter::PlayerII).sample.positions ==
                std::vector<int>{2, 5});
    }
    SECTION("cutter symmetry for every shape with n <= 45") {
        for (int m = 0; m <= 5; ++m) {
            for (int k = 1; (2 * m + 1) * k <= 45; ++k) {
                const int n = (2 * m + 1) * k;
                Population pop = strict_population(n);
                Outcome one = quantile_outcome(pop, k, m, Cutter::PlayerI);
                Outcome two = quantile_outcome(pop, k, m, Cutter::PlayerII);
                std::vector<int> expected;
                for (int j = 0; j < k; ++j) expected.push_back(m + 1 + (2 * m + 1) * j);
                INFO("n=" << n << " k=" << k << " m=" << m);
                REQUIRE(one.sample.positions == expected);
                REQUIRE(samples_equivalent(pop, one.sample, two.sample));
            }
        }
    }
    SECTION("shape validation") {
        REQUIRE_THROWS_AS(quantile_outcome(strict_population(8), 2, 1, Cutter::PlayerI),
                          std::invalid_argument);
    }
}

TEST_CASE("nested shortlists implement arbitrary targets", "[mechanisms]") {
    SECTION("exhaustive over every target vector with n <= 10") {
        for (int n = 1; n <= 10; ++n) {
            Population pop = strict_population(n);
            // Every nonempty subset of 1..n, read off a bitmask, is a valid
            // strictly increasing target vector.
            for (unsigned mask = 1; mask < (1u << n); ++mask) {
                std::vector<int> targets;
                for (int p = 1; p <= n; ++p) {
                    if (mask & (1u << (p - 1))) targets.push_back(p);
                }
                auto [config, outcome] = implement_quantiles(pop, targets);
                REQUIRE(outcome.sample.positions == targets);
                REQUIRE(config.kind == MechanismKind::OverlappingCutAndChoose);
                // The stored config replays to the same outcome.
                Outcome replay = play_mechanism(pop, config, nullptr);
                REQUIRE(replay.sample.positions == targets);
            }
        }
    }
    SECTION("the shortlists are the bottom prefixes of the targets") {
        Population pop = strict_population(6);
        auto [config, outcome] = implement_quantiles(pop, {2, 5});
        REQUIRE(config.block_sizes == std::vector<int>{2, 5});
        REQUIRE(outcome.transcript.front().actor == "II");
        REQUIRE(outcome.transcript.front().message == "offer shortlist 1: positions 1..2");
    }
    SECTION("target validation") {
        Population pop = strict_population(5);
        REQUIRE_THROWS_AS(implement_quantiles(pop, {}), std::invalid_argument);
        REQUIRE_THROWS_AS(implement_quantiles(pop, {2, 2}), std::invalid_argument);
        REQUIRE_THROWS_AS(implement_quantiles(pop, {3, 1}), std::invalid_argument);
        REQUIRE_THROWS_AS(implement_quantiles(pop, {0, 2}), std::invalid_argument);
        REQUIRE_THROWS_AS(implement_quantiles(pop, {1, 6}), std::invalid_argument);
    }
}

TEST_CASE("random sampling is uniform over k-subsets", "[mechanisms]") {
    Population pop = strict_population(4);

    SECTION("the exact distribution lists all C(4,2)=6 samples at 1/6") {
        RandomStream rng(1, "test", 0);
        Outcome out = random_sample(pop, 2, rng);
        REQUIRE(out.distribution.size() == 6);
        for (const auto& [sample, prob] : out.distribution) {
            REQUIRE(prob == Rational(BigInt(1), BigInt(6)));
        }
    }
    SECTION("empirical frequencies sit near 1/6") {
        RandomStream rng(2, "test", 0);
        std::map<std::vector<int>, int> counts;
        const int reps = 60000;
        for (int r = 0; r < reps; ++r) {
            ++counts[random_sample(pop, 2, rng).sample.positions];
        }
        REQUIRE(counts.size() == 6);
        // Five sigma around reps/6.
        double expect = reps / 6.0;
        double sigma = std::sqrt(reps * (1.0 / 6.0) * (5.0 / 6.0));
        for (const auto& [positions, count] : counts) {
            REQUIRE(std::abs(count - expect) < 5.0 * sigma);
        }
    }
    SECTION("the full sample is the only k=n draw") {
        RandomStream rng(3, "test", 0);
        REQUIRE(random_sample(pop, 4, rng).sample.positions == std::vector<int>{1, 2, 3, 4});
    }
    SECTION("parameter validation") {
        RandomStream rng(4, "test", 0);
        REQUIRE_THROWS_AS(random_sample(pop, 0, rng), std::invalid_argument);
        REQUIRE_THROWS_AS(random_sample(pop, 5, rng), std::invalid_argument);
    }
}

TEST_CASE("strike and replace follows the dealt script", "[mechanisms]") {
    Population pop = strict_population(6);

    SECTION("hand-traced round: initial {1,2}, I strikes 1 for 6, II strikes 6 for 3") {
        ScriptedSource rng({0, 0, 3, 2});
        Outcome out = strike_and_replace(pop, 2, 1, StrikeStrategy::Unconditional, rng);
        REQUIRE(out.sample.positions == std::vector<int>{2, 3});
        REQUIRE(rng.exhausted());
        // Transcript records both veto rounds.
        bool saw_strike_i = false, saw_strike_ii = false;
        for (const auto& entry : out.transcript) {
            if (entry.actor == "I" && entry.message.find("strike") != std::string::npos)
                saw_strike_i = true;
            if (entry.actor == "II" && entry.message.find("strike") != std::string::npos)
                saw_strike_ii = true;
        }
        REQUIRE(saw_strike_i);
        REQUIRE(saw_strike_ii);
    }
    SECTION("threshold strikes stop at the midpoint") {
        // Initial sample {4,5}: Player I only strikes positions with
        // 2p < n+1 = 7, and both members sit above that, so Player I passes.
        // Player II strikes 5 (2*5 > 7) and the refill draw lands on 3.
        ScriptedSource rng({3, 3, 0});
        Outcome out = strike_and_replace(pop, 2, 1, StrikeStrategy::Threshold, rng);
        REQUIRE(out.sample.positions == std::vector<int>{3, 4});
        REQUIRE(rng.exhausted());
    }
    SECTION("with c=0 the mechanism is exactly a random sample") {
        RandomStream a(7, "test", 0);
        RandomStream b(7, "test", 0);
        Outcome plain = random_sample(pop, 3, a);
        Outcome struck = strike_and_replace(pop, 3, 0, StrikeStrategy::Unconditional, b);
        REQUIRE(plain.sample.positions == struck.sample.positions);
    }
    SECTION("capacity validation: k + 2c <= n") {
        RandomStream rng(8, "test", 0);
        REQUIRE_THROWS_AS(strike_and_replace(pop, 4, 2, StrikeStrategy::Unconditional, rng),
                          std::invalid_argument);
        REQUIRE_NOTHROW(strike_and_replace(pop, 2, 2, StrikeStrategy::Unconditional, rng));
    }
    SECTION("refills come from never-seen items") {
        // Track every position entering the sample across many runs: after a
        // strike the replacement must differ from all items seen so far.
        RandomStream rng(9, "test", 0);
        for (int r = 0; r < 200; ++r) {
            Outcome out = strike_and_replace(pop, 2, 2, StrikeStrategy::Unconditional, rng);
            std::vector<int> seen = out.sample.positions;
            std::sort(seen.begin(), seen.end());
            REQUIRE(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
        }
    }
}

TEST_CASE("median sample vetoes down to the middle candidate", "[mechanisms]") {
    Population pop = strict_population(5);

    SECTION("hand-traced: candidates {5},{1},{3} leave {3}") {
        ScriptedSource rng({4, 0, 2});
        Outcome out = median_sample(pop, 1, 1, rng);
        REQUIRE(out.sample.positions == std::vector<int>{3});
        REQUIRE(rng.exhausted());
    }
    SECTION("with c=0 the mechanism is exactly a random sample") {
        RandomStream a(11, "test", 0);
        RandomStream b(11, "test", 0);
        REQUIRE(median_sample(pop, 2, 0, a).sample.positions ==
                random_sample(pop, 2, b).sample.positions);
    }
    SECTION("even k orders candidates by the sum of the middle pair") {
        // k=2: the median key of {1,4} is 5, of {2,3} also 5; the position
        // sums tie as well, so draw order decides and the first drawn wins
        // the middle slot of a 3-candidate race only if the third candidate
        // splits them.  Candidates: {1,4}, {2,3}, {5,?}: script {5,4} -> key 9.
        // Order: {1,4}(sum 5, draw 0), {2,3}(sum 5, draw 1), {4,5}(9).
        // Player I vetoes the lowest ({1,4}), Player II the highest ({4,5}),
        // leaving {2,3}.
        ScriptedSource rng({0, 2, 1, 1, 4, 3});
        Outcome out = median_sample(pop, 2, 1, rng);
        REQUIRE(out.sample.positions == std::vector<int>{2, 3});
        REQUIRE(rng.exhausted());
    }
    SECTION("veto transcript names both players") {
        ScriptedSource rng({4, 0, 2});
        Outcome out = median_sample(pop, 1, 1, rng);
        REQUIRE(out.transcript.size() >= 2);
        bool veto_i = false, veto_ii = false;
        for (const auto& e : out.transcript) {
            if (e.actor == "I" && e.message.find("veto") != std::string::npos) veto_i = true;
            if (e.actor == "II" && e.message.find("veto") != std::string::npos) veto_ii = true;
        }
        REQUIRE(veto_i);
        REQUIRE(veto_ii);
    }
    SECTION("needs 2c+1 candidate room") {
        RandomStream rng(12, "test", 0);
        REQUIRE_THROWS_AS(median_sample(pop, 6, 1, rng), std::invalid_argument);
    }
}

TEST_CASE("median shortlist selects the lower middle item", "[mechanisms]") {
    REQUIRE(median_shortlist(strict_population(1)).sample.positions == std::vector<int>{1});
    REQUIRE(median_shortlist(strict_population(3)).sample.positions == std::vector<int>{2});
    REQUIRE(median_shortlist(strict_population(4)).sample.positions == std::vector<int>{3});
    REQUIRE(median_shortlist(strict_population(5)).sample.positions == std::vector<int>{3});
    REQUIRE(median_shortlist(strict_population(9)).sample.positions == std::vector<int>{5});
}

TEST_CASE("random cut and choose draws one item per block", "[mechanisms]") {
    Population pop = strict_population(4);
    std::vector<std::vector<int>> blocks{{1, 2}, {3, 4}};

    SECTION("exact distribution: all four outcomes at 1/4") {
        RandomStream rng(13, "test", 0);
        Outcome out = random_cut_and_choose(pop, blocks, rng);
        REQUIRE(out.distribution.size() == 4);
        for (const auto& [sample, prob] : out.distribution) {
            REQUIRE(prob == Rational(BigInt(1), BigInt(4)));
            REQUIRE(sample.size() == 2);
        }
    }
    SECTION("empirical frequencies near 1/4") {
        RandomStream rng(14, "test", 0);
        std::map<std::vector<int>, int> counts;
        const int reps = 40000;
        for (int r = 0; r < reps; ++r) {
            ++counts[random_cut_and_choose(pop, blocks, rng).sample.positions];
        }
        REQUIRE(counts.size() == 4);
        double expect = reps / 4.0;
        double sigma = std::sqrt(reps * 0.25 * 0.75);
        for (const auto& [positions, count] : counts) {
            REQUIRE(std::abs(count - expect) < 5.0 * sigma);
        }
    }
    SECTION("blocks must partition all positions into equal sizes") {
        RandomStream rng(15, "test", 0);
        REQUIRE_THROWS_AS(random_cut_and_choose(pop, {{1, 2}, {2, 3}}, rng), std::invalid_argument);
        REQUIRE_THROWS_AS(random_cut_and_choose(pop, {{1, 2}, {3}}, rng), std::invalid_argument);
        REQUIRE_THROWS_AS(random_cut_and_choose(pop, {{1, 2}}, rng), std::invalid_argument);
        REQUIRE_THROWS_AS(random_cut_and_choose(pop, {{1, 2}, {3, 5}}, rng), std::invalid_argument);
    }
}

TEST_CASE("mechanism dispatch and naming", "[mechanisms]") {
    Population pop = strict_population(6);

    SECTION("kind names round trip") {
        for (MechanismKind kind :
             {MechanismKind::Quantile, MechanismKind::CutAndChoose,
              MechanismKind::OverlappingCutAndChoose, MechanismKind::Random,
              MechanismKind::StrikeAndReplace, MechanismKind::MedianSample,
              MechanismKind::MedianShortlist, MechanismKind::RandomCutAndChoose}) {
            REQUIRE(mechanism_kind_from_name(mechanism_kind_name(kind)) == kind);
        }
        REQUIRE_THROWS_AS(mechanism_kind_from_name("bogus"), std::invalid_argument);
    }
    SECTION("randomized kinds require a source, deterministic ones ignore it") {
        MechanismConfig config;
        config.kind = MechanismKind::Random;
        config.k = 2;
        REQUIRE_THROWS_AS(play_mechanism(pop, config, nullptr), std::invalid_argument);

        config.kind = MechanismKind::Quantile;
        config.k = 2;
        config.m = 1;
        REQUIRE(play_mechanism(pop, config, nullptr).sample.positions == std::vector<int>{2, 5});

        REQUIRE(mechanism_is_randomized(MechanismKind::Random));
        REQUIRE(mechanism_is_randomized(MechanismKind::StrikeAndReplace));
        REQUIRE(mechanism_is_randomized(MechanismKind::MedianSample));
        REQUIRE(mechanism_is_randomized(MechanismKind::RandomCutAndChoose));
        REQUIRE_FALSE(mechanism_is_randomized(MechanismKind::Quantile));
        REQUIRE_FALSE(mechanism_is_randomized(MechanismKind::CutAndChoose));
        REQUIRE_FALSE(mechanism_is_randomized(MechanismKind::OverlappingCutAndChoose));
        REQUIRE_FALSE(mechanism_is_randomized(MechanismKind::MedianShortlist));
    }
    SECTION("random cut and choose defaults to the consecutive partition") {
        MechanismConfig config;
        config.kind = MechanismKind::RandomCutAndChoose;
        config.k = 3;
        RandomStream rng(16, "test", 0);
        Outcome out = play_mechanism(pop, config, &rng);
        REQUIRE(out.sample.size() == 3);
        // One pick per consecutive block {1,2},{3,4},{5,6}.
        REQUIRE(out.sample.positions[0] <= 2);
        REQUIRE(out.sample.positions[1] >= 3);
        REQUIRE(out.sample.positions[1] <= 4);
        REQUIRE(out.sample.positions[2] >= 5);
    }
    SECTION("cut and choose via config honours the cutter field") {
        MechanismConfig config;
        config.kind = MechanismKind::CutAndChoose;
        config.block_sizes = {3, 3};
        config.cutter = Cutter::PlayerII;
        REQUIRE(play_mechanism(pop, config, nullptr).sample.positions == std::vector<int>{3, 6});
    }
}
