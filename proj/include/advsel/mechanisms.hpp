#pragma once

#include "advsel/core.hpp"
#include "advsel/random.hpp"
#include "advsel/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace advsel {

// Selection procedures played by two adversaries with fully opposed interests
// over the population ranking: Player I prefers high ranked items, Player II
// low ranked ones.  Every procedure returns the equilibrium outcome (for the
// deterministic game forms) or the realized outcome under supplied randomness
// (for the randomized ones).
//
// Tie handling is deterministic throughout.  A cutter proposes the canonical
// equilibrium partition made of contiguous position ranges, and a chooser
// picks the lowest position among its most preferred items in a block, so
// every procedure returns a single well defined representative of its
// equilibrium outcome class.  Other equilibria select items of exactly the
// same levels; compare with samples_equivalent.

enum class Cutter { PlayerI, PlayerII };

enum class StrikeStrategy {
    // Strike exactly c items regardless of where they sit.
    Unconditional,
    // Strike only items on the striker's bad half: position p is struck by
    // Player I iff 2p < n+1 and by Player II iff 2p > n+1.
    Threshold,
};

enum class MechanismKind {
    Quantile,
    CutAndChoose,
    OverlappingCutAndChoose,
    Random,
    StrikeAndReplace,
    MedianSample,
    MedianShortlist,
    RandomCutAndChoose,
};

// Parameter record for any mechanism; serializes to and from JSON so runs
// can be scripted and replayed.  Fields irrelevant to `kind` are ignored.
struct MechanismConfig {
    MechanismKind kind = MechanismKind::Random;
    int k = 0;
    int m = 0;
    int c = 0;
    std::vector<int> block_sizes;           // cut-and-choose block sizes or
                                            // overlapping subset sizes
    std::vector<std::vector<int>> blocks;   // random cut-and-choose partition
    Cutter cutter = Cutter::PlayerI;
    StrikeStrategy strike = StrikeStrategy::Unconditional;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const MechanismConfig&, const MechanismConfig&) = default;
};

struct TranscriptEntry {
    std::string actor;    // "I", "II" or "chance"
    std::string message;

    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct Outcome {
    Sample sample;
    std::vector<TranscriptEntry> transcript;
    // Exact outcome distribution for small randomized game forms; empty when
    // the mechanism is deterministic or the support is too large to tabulate.
    std::vector<std::pair<Sample, Rational>> distribution;
};

// The contiguous position ranges a cutter proposes in equilibrium: Player I
// deals the given sizes downward from the top of the ranking, Player II deals
// them upward from the bottom.  Sizes must be non-decreasing with sum <= n.
// Blocks are returned in size order, positions ascending within a block.
std::vector<std::vector<int>> equilibrium_partition(int n, const std::vector<int>& sizes,
                                                    Cutter cutter);

// Cut-and-choose: the cutter partitions items into blocks of the given sizes
// (leaving the rest aside), the other player takes one item from each block.
// Equilibrium picks land at positions n - (s_1+...+s_j) + 1 when Player I
// cuts and at the class of positions s_1+...+s_j when Player II cuts.
Outcome cut_and_choose_outcome(const Population& pop, const std::vector<int>& sizes,
                               Cutter cutter);

// The quantile mechanism: cut-and-choose with one block of m+1 items and k-1
// blocks of 2m+1 items on a population of n = (2m+1)k.  In equilibrium the
// sample sits at the evenly spread positions m+1+(2m+1)j, whichever player
// cuts.
Outcome quantile_outcome(const Population& pop, int k, int m, Cutter cutter);

// Builds the game form whose equilibrium selects exactly the given target
// positions: Player II offers the nested shortlists made of the t_j lowest
// ranked items for each target t_j, and Player I takes one distinct item from
// each shortlist.  Targets must be strictly increasing.  Returns the config
// describing that game together with its equilibrium outcome.
std::pair<MechanismConfig, Outcome> implement_quantiles(const Population& pop,
                                                        const std::vector<int>& targets);

// Uniform sample of k distinct items, by partial Fisher-Yates over the
// positions: draw i (0-based) consumes one next_below(n - i).
Outcome random_sample(const Population& pop, int k, RandomSource& rng);

// Random sample followed by veto rounds: Player I strikes its c worst
// in-sample items (the lowest positions), each strike refilled by a uniform
// draw from the items never seen so far; then Player II does the same from
// the top.  Strikes of a round are fixed before its refills, so a refill is
// only exposed to the other player's round.  Requires k + 2c <= n.
Outcome strike_and_replace(const Population& pop, int k, int c, StrikeStrategy strategy,
                           RandomSource& rng);

// Draws 2c+1 independent k-samples; Player I vetoes the c with the lowest
// sample medians, Player II the c with the highest, leaving the median
// candidate.  Candidates are ordered by median position (for even k the sum
// of the two middle positions), ties by position sum, then by draw order.
Outcome median_sample(const Population& pop, int k, int c, RandomSource& rng);

// One-item shortlist game: Player I shortlists ceil(n/2) items, Player II
// picks one.  Equilibrium: the top half is offered and its worst item taken,
// the item at position n - ceil(n/2) + 1.
Outcome median_shortlist(const Population& pop);

// Player I fixes a partition of all n items into k blocks of equal size m,
// then one item of each block is drawn uniformly.  `blocks` must cover every
// position exactly once.  The exact outcome distribution is tabulated when
// the support m^k is at most 1024.
Outcome random_cut_and_choose(const Population& pop,
                              const std::vector<std::vector<int>>& blocks, RandomSource& rng);

// Validates `config` against the population size and dispatches to the
// matching procedure.  `rng` may be null for the deterministic kinds.
Outcome play_mechanism(const Population& pop, const MechanismConfig& config,
                       RandomSource* rng);

// True iff the mechanism kind consumes randomness.
bool mechanism_is_randomized(MechanismKind kind);

const char* mechanism_kind_name(MechanismKind kind);
MechanismKind mechanism_kind_from_name(const std::string& name);

}  // namespace advsel
