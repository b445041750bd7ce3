#pragma once

#include "advsel/core.hpp"
#include "advsel/rational.hpp"

#include <functional>
#include <vector>

namespace advsel {

// Exhaustive search oracles.  These recompute optimality claims from first
// principles with exact arithmetic; the closed forms and mechanisms elsewhere
// in the library are tested against them.  Every search is bounded by an
// explicit guard and throws GuardExceeded rather than truncating.

enum class StatKind { KS, L1, CvM };

const char* stat_kind_name(StatKind stat);

// Scans every k-subset of positions and reports the exact minimum of the
// chosen statistic.  When n = (2m+1)k for an integer m >= 0, the quantile
// sample is compared against the minimizer set.
struct OptimalityReport {
    StatKind stat = StatKind::KS;
    int k = 0;
    Rational minimum;
    long long samples_checked = 0;
    long long minimizer_count = 0;
    std::vector<Sample> minimizers;  // at most 64 kept for reporting

    bool quantile_applicable = false;
    Sample quantile_sample;
    bool quantile_attains_minimum = false;
    // True iff every minimizer selects exactly the quantile sample's levels.
    bool minimizers_match_quantile_class = false;
};

OptimalityReport optimal_samples_bruteforce(const Population& pop, int k, StatKind stat,
                                            long long guard = 10'000'000);

// All three statistics at once on the same population.
struct QuantileOptimality {
    OptimalityReport ks;
    OptimalityReport l1;
    OptimalityReport cvm;
    // Quantile sample attains each minimum and nothing outside its
    // equivalence class does.
    bool quantile_uniquely_optimal = false;
};

QuantileOptimality check_quantile_optimality(const Population& pop, int k,
                                             long long guard = 10'000'000);

// Moments of the block-uniform sampling scheme: given real values and a
// partition into k equal blocks, one item is drawn uniformly from each block.
// All quantities are exact rationals.
//
// The expected sample variance obeys the identity
//   E[s^2] = population variance - (1/k^2) sum_j Var(block j)
// and the variance of the sample mean is (1/k^2) sum_j Var(block j); the
// direct enumeration over all m^k samples is also run when that support is
// within `enum_guard`, as an independent cross check.
struct PartitionMoments {
    Rational mean;                       // of the sample mean; equals the
                                         // population mean for any partition
    Rational expected_sample_variance;   // via the block-variance identity
    Rational variance_of_sample_mean;
    bool enumerated = false;
    long long samples_enumerated = 0;
    Rational enumerated_mean;                      // valid iff `enumerated`
    Rational enumerated_expected_sample_variance;  // valid iff `enumerated`
};

PartitionMoments partition_moments(const std::vector<Rational>& values,
                                   const std::vector<std::vector<int>>& blocks,
                                   long long enum_guard = 1'000'000);

// Visits every partition of 1..n into k blocks of size m (n = km), in
// canonical order: blocks sorted by their smallest element, elements
// ascending within a block.  The visitor may return false to stop.  Throws
// GuardExceeded if the partition count exceeds `guard`.
void for_each_equal_partition(int n, int k,
                              const std::function<bool(const std::vector<std::vector<int>>&)>& visit,
                              long long guard = 1'000'000);

// Exhaustive search over all equal-block partitions of the given values,
// reporting the exact extremes of one of the two variance objectives and how
// the "ordered" partition (consecutive runs of the ascending value order)
// compares.  The two objectives are affinely opposed: for a fixed population,
// minimizing the expected sample variance is the same as maximizing the
// variance of the sample mean.
enum class PartitionObjective { ExpectedSampleVariance, SampleMeanVariance };

struct PartitionSearchResult {
    PartitionObjective objective = PartitionObjective::ExpectedSampleVariance;
    long long partitions_checked = 0;
    Rational minimum;
    Rational maximum;
    std::vector<std::vector<int>> argmin;  // first minimizer in canonical order
    std::vector<std::vector<int>> argmax;
    Rational ordered_value;
    std::vector<std::vector<int>> ordered_partition;
    bool ordered_is_minimum = false;
    bool ordered_is_maximum = false;
};

PartitionSearchResult best_partition_bruteforce(const std::vector<Rational>& values, int k,
                                                PartitionObjective objective,
                                                long long guard = 1'000'000);

}  // namespace advsel
