#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "advsel/core.hpp"
#include "advsel/rational.hpp"
#include "advsel/stats.hpp"

using namespace advsel;

namespace {

// Reference statistics computed straight from the definitions in exact
// rational arithmetic.  Deliberately shares no code with the production
// kernels beyond the Population accessors.
Rational ref_fx(const Population& pop, int position) {
    return Rational(pop.class_end(position)) / Rational(pop.size());
}

Rational ref_fy(const Population& pop, const Sample& sample, int position) {
    int level = pop.level_at(position);
    int count = 0;
    for (int p : sample.positions) {
        if (pop.level_at(p) <= level) ++count;
    }
    return Rational(count) / Rational(sample.size());
}

Rational ref_abs(const Rational& r) { return r.sign() < 0 ? Rational(0) - r : r; }

Rational ref_ks(const Population& pop, const Sample& sample) {
    Rational best;
    for (int i = 1; i <= pop.size(); ++i) {
        Rational gap = ref_abs(ref_fx(pop, i) - ref_fy(pop, sample, i));
        if (gap > best) best = gap;
    }
    return best;
}

Rational ref_l1(const Population& pop, const Sample& sample) {
    Rational sum;
    for (int i = 1; i <= pop.size(); ++i) {
        sum += ref_abs(ref_fx(pop, i) - ref_fy(pop, sample, i));
    }
    return sum / Rational(pop.size());
}

Rational ref_cvm(const Population& pop, const Sample& sample) {
    Rational sum;
    for (int i = 1; i <= pop.size(); ++i) {
        Rational gap = ref_fx(pop, i) - ref_fy(pop, sample, i);
        sum += gap * gap;
    }
    return sum / Rational(pop.size());
}

// Visits every k-subset of 1..n as a sample.
template <typename Visit>
void for_each_sample(int n, int k, Visit visit) {
    std::vector<int> pos(k);
    for (int i = 0; i < k; ++i) pos[i] = i + 1;
    for (;;) {
        visit(Sample{pos});
        int i = k - 1;
        while (i >= 0 && pos[i] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++pos[i];
        for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
}

Sample quantile_positions(int k, int m) {
    Sample s;
    for (int j = 0; j < k; ++j) s.positions.push_back(m + 1 + (2 * m + 1) * j);
    return s;
}

}  // namespace

TEST_CASE("frozen anchor values at n=9, k=3, m=1", "[stats]") {
    Population pop = population_from_levels({1, 2, 3, 4, 5, 6, 7, 8, 9});
    Sample quantiles{{2, 5, 8}};

    REQUIRE(ks_stat(pop, quantiles) == Rational(BigInt(1), BigInt(9)));
    REQUIRE(l1_stat(pop, quantiles) == Rational(BigInt(2), BigInt(27)));
    REQUIRE(cvm_stat(pop, quantiles) == Rational(BigInt(2), BigInt(243)));

    // The same values fall out of the reference implementation.
    REQUIRE(ref_ks(pop, quantiles) == Rational(BigInt(1), BigInt(9)));
    REQUIRE(ref_l1(pop, quantiles) == Rational(BigInt(2), BigInt(27)));
    REQUIRE(ref_cvm(pop, quantiles) == Rational(BigInt(2), BigInt(243)));

    // And from the cdf-level entry points.
    Cdf fx = population_cdf(pop);
    Cdf fy = sample_cdf(pop, quantiles);
    REQUIRE(ks_from_cdfs(fx, fy) == Rational(BigInt(1), BigInt(9)));
    REQUIRE(l1_from_cdfs(fx, fy) == Rational(BigInt(2), BigInt(27)));
    REQUIRE(cvm_from_cdfs(fx, fy) == Rational(BigInt(2), BigInt(243)));
}

TEST_CASE("frozen anchor values at n=972, k=12, m=40", "[stats]") {
    std::vector<int> levels(972);
    for (int i = 0; i < 972; ++i) levels[i] = i + 1;
    Population pop = population_from_levels(levels);
    Sample quantiles = quantile_positions(12, 40);
    REQUIRE(quantiles.positions.front() == 41);
    REQUIRE(quantiles.positions.back() == 41 + 81 * 11);

    REQUIRE(ks_stat(pop, quantiles) == Rational(BigInt(10), BigInt(243)));
    REQUIRE(l1_stat(pop, quantiles) == Rational(BigInt(410), BigInt(19683)));
    REQUIRE(cvm_stat(pop, quantiles) == Rational(BigInt(205), BigInt(354294)));

    QuantileClosedForms forms = quantile_closed_forms(972, 12, 40);
    REQUIRE(forms.ks == ks_stat(pop, quantiles));
    REQUIRE(forms.l1 == l1_stat(pop, quantiles));
    REQUIRE(forms.cvm == cvm_stat(pop, quantiles));
}

TEST_CASE("closed forms match direct statistics for k <= 5, m <= 4", "[stats]") {
    for (int k = 1; k <= 5; ++k) {
        for (int m = 0; m <= 4; ++m) {
            const int n = (2 * m + 1) * k;
            std::vector<int> levels(n);
            for (int i = 0; i < n; ++i) levels[i] = i + 1;
            Population pop = population_from_levels(levels);
            Sample quantiles = quantile_positions(k, m);

            QuantileClosedForms forms = quantile_closed_forms(n, k, m);
            INFO("k=" << k << " m=" << m);
            REQUIRE(forms.ks == Rational(m) / Rational(n));
            REQUIRE(forms.l1 == Rational(static_cast<long long>(m) * (m + 1)) /
                                    Rational(static_cast<long long>(n) * (2 * m + 1)));
            REQUIRE(forms.cvm == Rational(static_cast<long long>(m) * (m + 1)) /
                                     Rational(3LL * n * n));
            REQUIRE(ks_stat(pop, quantiles) == forms.ks);
            REQUIRE(l1_stat(pop, quantiles) == forms.l1);
            REQUIRE(cvm_stat(pop, quantiles) == forms.cvm);
        }
    }

    SECTION("shape validation") {
        REQUIRE_THROWS_AS(quantile_closed_forms(10, 3, 1), std::invalid_argument);
        REQUIRE_THROWS_AS(quantile_closed_forms(9, 0, 1), std::invalid_argument);
        REQUIRE_THROWS_AS(quantile_closed_forms(9, 3, -1), std::invalid_argument);
    }
}

TEST_CASE("fast kernels agree with the rational reference exhaustively", "[stats]") {
    std::vector<std::vector<int>> populations = {
        {1, 2, 3, 4, 5},
        {1, 2, 3, 4, 5, 6, 7},
        {1, 1, 2, 3, 3},        // ties at both ends of the range
        {1, 1, 1, 1},           // fully tied
        {1, 2, 2, 2, 3, 3, 4},  // mixed class sizes
        {2, 1, 3, 2, 1, 4, 3},  // shuffled input order
    };
    for (const auto& levels : populations) {
        Population pop = population_from_levels(levels);
        const int n = pop.size();
        for (int k = 1; k <= n; ++k) {
            for_each_sample(n, k, [&](const Sample& s) {
                INFO("n=" << n << " k=" << k);
                REQUIRE(ks_stat(pop, s) == ref_ks(pop, s));
                REQUIRE(l1_stat(pop, s) == ref_l1(pop, s));
                REQUIRE(cvm_stat(pop, s) == ref_cvm(pop, s));
            });
        }
    }
}

TEST_CASE("statistic invariants hold for every sample", "[stats]") {
    Population pop = population_from_levels({1, 2, 2, 3, 4, 5, 5, 6});
    const int n = pop.size();
    for (int k = 1; k <= n; ++k) {
        for_each_sample(n, k, [&](const Sample& s) {
            Rational ks = ks_stat(pop, s);
            Rational l1 = l1_stat(pop, s);
            Rational cvm = cvm_stat(pop, s);
            // 0 <= L1 <= KS <= 1: the mean absolute gap cannot exceed the
            // largest gap, and the gap of two distribution functions is at
            // most one.  CvM <= KS^2 by the same averaging argument.
            REQUIRE(l1.sign() >= 0);
            REQUIRE(l1 <= ks);
            REQUIRE(ks <= Rational(1));
            REQUIRE(cvm <= ks * ks);
            REQUIRE(cvm.sign() >= 0);
        });
    }

    SECTION("a fully tied population is matched by any sample") {
        Population tied = population_from_levels({1, 1, 1, 1, 1});
        REQUIRE(ks_stat(tied, Sample{{1}}).is_zero());
        REQUIRE(l1_stat(tied, Sample{{2, 4}}).is_zero());
        REQUIRE(cvm_stat(tied, Sample{{5}}).is_zero());
    }

    SECTION("the full sample of a strict population has small but nonzero distance") {
        // With y = x the sample cdf jumps by 1/n at every point, so all three
        // statistics vanish.
        Population strict = population_from_levels({1, 2, 3, 4});
        Sample all{{1, 2, 3, 4}};
        REQUIRE(ks_stat(strict, all).is_zero());
        REQUIRE(l1_stat(strict, all).is_zero());
        REQUIRE(cvm_stat(strict, all).is_zero());
    }
}

TEST_CASE("statistics are ordinal: monotone value maps change nothing", "[stats]") {
    std::vector<double> base = {-1.5, 0.25, 0.25, 3.0, 7.5};
    std::vector<double> mapped;
    for (double v : base) mapped.push_back(v * v * v + 2.0);  // strictly increasing map

    Population a = population_from_values(base);
    Population b = population_from_values(mapped);
    for_each_sample(5, 2, [&](const Sample& s) {
        REQUIRE(ks_stat(a, s) == ks_stat(b, s));
        REQUIRE(l1_stat(a, s) == l1_stat(b, s));
        REQUIRE(cvm_stat(a, s) == cvm_stat(b, s));
    });
}

TEST_CASE("cdf level entry points reject mismatched supports", "[stats]") {
    Population pop = population_from_levels({1, 2, 3});
    Cdf fx = population_cdf(pop);
    Cdf bad{{1, 2}, 2};
    REQUIRE_THROWS_AS(ks_from_cdfs(fx, bad), std::invalid_argument);
    REQUIRE_THROWS_AS(l1_from_cdfs(fx, bad), std::invalid_argument);
    REQUIRE_THROWS_AS(cvm_from_cdfs(fx, bad), std::invalid_argument);
}
