#pragma once

#include "advsel/core.hpp"
#include "advsel/mechanisms.hpp"
#include "advsel/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace advsel {

// Monte Carlo comparison of mechanisms on a fixed population.  Every random
// draw comes from a stream derived from (master seed, use-site label,
// replicate index), so results are bit-identical for any worker count and
// unaffected by adding or removing other mechanisms from a run.

// One mechanism entry of an experiment; `id` doubles as the stream label and
// must be unique within the experiment.
struct MechanismRun {
    std::string id;
    MechanismConfig config;

    friend bool operator==(const MechanismRun&, const MechanismRun&) = default;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    int replicates = 1000;
    std::vector<MechanismRun> mechanisms;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct RepRecord {
    std::string mechanism;
    int replicate = 0;
    Sample sample;
    Rational ks;
    Rational l1;
    Rational cvm;
};

// Resolves a worker count: a positive request wins, otherwise the
// ADVSEL_THREADS environment variable, otherwise 1.
int resolve_thread_count(std::optional<int> requested);

// Plays every mechanism for every replicate and returns one record per
// (mechanism, replicate), grouped by mechanism in listed order.  Deterministic
// mechanisms simply repeat their outcome each replicate.
std::vector<RepRecord> run_comparison(const Population& pop, const ExperimentConfig& config,
                                      int threads = 1);

// A population of n independent standard normal values, drawn from the
// stream (seed, "population").
Population standard_normal_population(int n, std::uint64_t seed);

// Smallest uniform-sample size whose mean KS distance matches the quantile
// mechanism's constant m/n within `tolerance`.  Mean KS decreases in the
// sample size, so a binary search brackets the answer; a small neighborhood
// scan then settles it under Monte Carlo noise.  Every evaluation uses
// `replicates` fresh samples from streams labeled by the candidate size.
// Throws std::runtime_error when no size lands inside the band.
struct CalibrationResult {
    int equivalent_n = 0;
    Rational mean_ks;      // at equivalent_n
    Rational target;       // m/n
    int evaluations = 0;
    int replicates = 0;
};

CalibrationResult calibrate_equivalent_n(const Population& pop, int k, int m, int replicates,
                                         double tolerance, std::uint64_t seed, int threads = 1);

// Exact lower empirical quantiles of the per-replicate KS values of one
// mechanism.
struct KsSummary {
    std::string mechanism;
    long long count = 0;
    Rational mean;
    Rational min;
    Rational q25;
    Rational median;
    Rational q75;
    Rational max;
};

std::vector<KsSummary> summarize_ks(const std::vector<RepRecord>& records);

// CSV emitters.  All decimals carry 12 significant digits.
void write_records_csv(const std::vector<RepRecord>& records, const std::string& path);
void write_ks_csv(const std::vector<RepRecord>& records, const std::string& path);
void write_ks_summary_csv(const std::vector<RepRecord>& records, const std::string& path);

// Population CDF against the equilibrium quantile sample CDF, one row per
// position: sorted_value,F_x,F_y.  Requires a population built from values.
void write_cdf_overlay_csv(const Population& pop, const Sample& sample,
                           const std::string& path);

// The full benchmark experiment: on a standard normal population of
// n = (2m+1)k items, the quantile mechanism against uniform sampling with
// k draws, strike-and-replace and median-sample vetoes with strength c, and
// uniform sampling recalibrated to the equivalent size.
struct BenchmarkExperimentConfig {
    int n = 972;
    int k = 12;
    int m = 40;
    int c = 3;
    int replicates = 1000;
    double tolerance = 0.002;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct BenchmarkExperimentResult {
    CalibrationResult calibration;
    ExperimentConfig experiment;
    std::vector<RepRecord> records;
};

BenchmarkExperimentResult run_benchmark_experiment(const Population& pop,
                                                   const BenchmarkExperimentConfig& config);

}  // namespace advsel
