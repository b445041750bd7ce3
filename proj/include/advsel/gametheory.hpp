#pragma once

#include "advsel/core.hpp"
#include "advsel/mechanisms.hpp"

#include <functional>
#include <string>
#include <vector>

namespace advsel {

// Game-theoretic analysis of the cut-and-choose family under arbitrary weak
// preferences for the two players, not just the opposed pair the mechanisms
// module assumes.

// Sum of the preference levels of the selected items.  Any utility function
// representing the weak preference is a monotone transform of a sum of level
// scores, so this canonical form decides every ordinal comparison.
long long canonical_utility(const Population& pop, const Preference& pref,
                            const Sample& sample);

// A cut-and-choose game form: the cutter partitions the items into blocks of
// the given sizes (non-decreasing; items may be left over) and the other
// player takes one item per block.
struct CutAndChooseGame {
    Population pop;
    Preference pref_i;
    Preference pref_ii;
    std::vector<int> sizes;
    Cutter cutter;
};

// A chooser strategy, reduced to its behavioral content: the item it takes
// from a block.  A full contingent strategy assigns a pick to every block the
// cutter could form; representing it as a rule keeps that object finite and
// lets the verifier evaluate it at any partition.
using ChoiceRule = std::function<int(const Population&, const std::vector<int>&)>;

// The rule that takes a most preferred item of the block, lowest position
// first on ties.
ChoiceRule best_response_rule(const Preference& pref);

struct Deviation {
    std::string deviator;  // "cutter" or "chooser"
    std::string description;
    long long gain = 0;
};

struct EquilibriumReport {
    bool is_equilibrium = false;
    Sample outcome;
    long long cutter_utility = 0;
    long long chooser_utility = 0;
    // Number of profitable unilateral deviations found; `deviations` keeps at
    // most 100 of them for reporting.
    long long deviation_count = 0;
    std::vector<Deviation> deviations;
    long long partitions_checked = 0;
};

// Certifies a pure strategy profile of the game: the cutter's partition
// (blocks matching game.sizes in order) and the chooser's rule.  The report
// lists every profitable unilateral deviation: alternative picks block by
// block for the chooser, alternative partitions for the cutter with the rule
// answering each one.  Since utilities are additive over blocks, a chooser
// deviation at some block is profitable iff some full contingent strategy is,
// so this check is exactly a pure Nash certification.  Throws GuardExceeded
// if the number of partitions exceeds `guard`.
EquilibriumReport verify_equilibrium(const CutAndChooseGame& game,
                                     const std::vector<std::vector<int>>& partition,
                                     const ChoiceRule& chooser_rule,
                                     long long guard = 10'000'000);

// Subgame perfect outcome by brute force: the chooser best-responds in every
// block (lowest position on ties) and the cutter picks, among all partitions,
// one maximizing its canonical utility; ties go to the lexicographically
// smallest partition, so the outcome is deterministic.  Throws GuardExceeded
// if more than `guard` partitions would be searched.
Outcome spe_cut_and_choose(const Population& pop, const Preference& pref_i,
                           const Preference& pref_ii, const std::vector<int>& sizes,
                           Cutter cutter, long long guard = 10'000'000);

// The outcome a player can guarantee against a fully opposed opponent: the
// cut-and-choose equilibrium on the population re-ranked by the player's own
// preference (ties keep input order).  `owner_cuts` says whether the
// preference owner is the cutting player.  Positions in the returned sample
// refer to the original population.
Outcome antagonistic_benchmark(const Population& pop, const Preference& pref,
                               const std::vector<int>& sizes, bool owner_cuts);

// One instance of the guarantee comparison: play the game with the given
// preferences to its subgame perfect outcome y, and compare against each
// player's antagonistic benchmark.
//   - Player I's guarantee is in utility terms: u_I(y) >= u_I(y*_I).
//   - Player II's guarantee is distributional: re-rank the population by
//     Player II's preference; y's CDF must sit weakly to the preferred side
//     of the benchmark's CDF at every point.
struct BenchmarkComparison {
    Sample outcome;
    Sample benchmark_i;
    Sample benchmark_ii;
    long long utility_i = 0;
    long long utility_i_benchmark = 0;
    long long utility_ii = 0;
    long long utility_ii_benchmark = 0;
    bool utility_claim_i = false;
    bool cdf_claim_ii = false;
};

BenchmarkComparison compare_with_benchmarks(const Population& pop, const Preference& pref_i,
                                            const Preference& pref_ii,
                                            const std::vector<int>& sizes, Cutter cutter,
                                            long long guard = 10'000'000);

}  // namespace advsel
