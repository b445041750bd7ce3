#include "advsel/gametheory.hpp"

#include "advsel/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace advsel {

namespace {

// Number of ordered partitions of the given block sizes drawn from n items,
// capped so callers can enforce enumeration guards without overflow.
long long partition_count_capped(int n, const std::vector<int>& sizes, long long cap) {
    long long count = 1;
    int remaining = n;
    for (int s : sizes) {
        // count *= C(remaining, s)
        for (int i = 1; i <= s; ++i) {
            count = count * (remaining - s + i) / i;
            if (count > cap) {
                return cap + 1;
            }
        }
        remaining -= s;
    }
    return count;
}

std::string blocks_text(const std::vector<std::vector<int>>& blocks) {
    std::ostringstream out;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        out << (j == 0 ? "[" : " [");
        for (std::size_t i = 0; i < blocks[j].size(); ++i) {
            if (i > 0) {
                out << ' ';
            }
            out << blocks[j][i];
        }
        out << ']';
    }
    return out.str();
}

// Enumerates every ordered partition into blocks of the given sizes, blocks
// filled in size order and each block ascending.  Enumeration order is
// lexicographic on the concatenated block tuple, so "first hit wins" tie
// breaking is deterministic.  The visitor may return false to stop early.
class PartitionEnumerator {
  public:
    PartitionEnumerator(int n, const std::vector<int>& sizes) : n_(n), sizes_(sizes) {
        blocks_.resize(sizes.size());
        for (std::size_t j = 0; j < sizes.size(); ++j) {
            blocks_[j].resize(sizes[j]);
        }
        in_use_.assign(n + 1, false);
    }

    template <typename Visitor>
    void run(const Visitor& visit) {
        fill_block(0, visit);
    }

  private:
    template <typename Visitor>
    bool fill_block(std::size_t j, const Visitor& visit) {
        if (j == blocks_.size()) {
            return visit(blocks_);
        }
        return choose(j, 0, 1, visit);
    }

    template <typename Visitor>
    bool choose(std::size_t j, int slot, int from, const Visitor& visit) {
        int s = sizes_[j];
        if (slot == s) {
            return fill_block(j + 1, visit);
        }
        // Enough free positions at or above `from` must remain.
        for (int p = from; p <= n_ - (s - slot - 1); ++p) {
            if (in_use_[p]) {
                continue;
            }
            in_use_[p] = true;
            blocks_[j][slot] = p;
            bool keep_going = choose(j, slot + 1, p + 1, visit);
            in_use_[p] = false;
            if (!keep_going) {
                return false;
            }
        }
        return true;
    }

    int n_;
    const std::vector<int>& sizes_;
    std::vector<std::vector<int>> blocks_;
    std::vector<bool> in_use_;
};

void validate_game_sizes(const Population& pop, const std::vector<int>& sizes) {
    if (sizes.empty()) {
        throw std::invalid_argument("cut and choose game: no blocks");
    }
    long long total = 0;
    int prev = 1;
    for (int s : sizes) {
        if (s < 1 || s < prev) {
            throw std::invalid_argument(
                "cut and choose game: block sizes must be positive and non-decreasing");
        }
        prev = s;
        total += s;
    }
    if (total > pop.size()) {
        throw std::invalid_argument("cut and choose game: block sizes exceed population");
    }
}

void validate_preference_fits(const Population& pop, const Preference& pref) {
    if (pref.item_count() != pop.size()) {
        throw std::invalid_argument("preference does not match population size");
    }
}

Sample picks_to_sample(std::vector<int> picks) {
    std::sort(picks.begin(), picks.end());
    return Sample{std::move(picks)};
}

}  // namespace

long long canonical_utility(const Population& pop, const Preference& pref,
                            const Sample& sample) {
    validate_preference_fits(pop, pref);
    validate_sample(pop, sample);
    long long total = 0;
    for (int p : sample.positions) {
        total += pref.level_of_position(pop, p);
    }
    return total;
}

ChoiceRule best_response_rule(const Preference& pref) {
    return [pref](const Population& pop, const std::vector<int>& block) {
        int best = block.front();
        int best_level = pref.level_of_position(pop, best);
        for (int p : block) {
            int level = pref.level_of_position(pop, p);
            if (level > best_level || (level == best_level && p < best)) {
                best = p;
                best_level = level;
            }
        }
        return best;
    };
}

EquilibriumReport verify_equilibrium(const CutAndChooseGame& game,
                                     const std::vector<std::vector<int>>& partition,
                                     const ChoiceRule& chooser_rule, long long guard) {
    const Population& pop = game.pop;
    validate_game_sizes(pop, game.sizes);
    validate_preference_fits(pop, game.pref_i);
    validate_preference_fits(pop, game.pref_ii);
    if (partition.size() != game.sizes.size()) {
        throw std::invalid_argument("verify_equilibrium: partition has wrong block count");
    }
    std::vector<bool> used(pop.size() + 1, false);
    for (std::size_t j = 0; j < partition.size(); ++j) {
        if (static_cast<int>(partition[j].size()) != game.sizes[j]) {
            throw std::invalid_argument("verify_equilibrium: block size mismatch");
        }
        for (int p : partition[j]) {
            if (p < 1 || p > pop.size() || used[p]) {
                throw std::invalid_argument("verify_equilibrium: blocks must be disjoint"
                                            " positions in 1..n");
            }
            used[p] = true;
        }
    }

    const Preference& cutter_pref = game.cutter == Cutter::PlayerI ? game.pref_i : game.pref_ii;
    const Preference& chooser_pref = game.cutter == Cutter::PlayerI ? game.pref_ii : game.pref_i;

    auto play = [&](const std::vector<std::vector<int>>& blocks) {
        std::vector<int> picks;
        picks.reserve(blocks.size());
        for (const auto& block : blocks) {
            int p = chooser_rule(pop, block);
            if (std::find(block.begin(), block.end(), p) == block.end()) {
                throw std::invalid_argument("verify_equilibrium: rule picked outside its block");
            }
            picks.push_back(p);
        }
        return picks;
    };

    EquilibriumReport report;
    std::vector<int> picks = play(partition);
    report.outcome = picks_to_sample(picks);
    report.cutter_utility = canonical_utility(pop, cutter_pref, report.outcome);
    report.chooser_utility = canonical_utility(pop, chooser_pref, report.outcome);

    auto note_deviation = [&](const char* who, std::string text, long long gain) {
        ++report.deviation_count;
        if (report.deviations.size() < 100) {
            report.deviations.push_back({who, std::move(text), gain});
        }
    };

    // Chooser deviations: utilities add over blocks, so any profitable
    // contingent strategy improves some single block at the proposed
    // partition.
    for (std::size_t j = 0; j < partition.size(); ++j) {
        int on_path = picks[j];
        long long on_path_level = chooser_pref.level_of_position(pop, on_path);
        for (int q : partition[j]) {
            long long gain = chooser_pref.level_of_position(pop, q) - on_path_level;
            if (gain > 0) {
                note_deviation("chooser",
                               "block " + std::to_string(j + 1) + ": pick position " +
                                   std::to_string(q) + " instead of " + std::to_string(on_path),
                               gain);
            }
        }
    }

    // Cutter deviations: every alternative partition, the rule answering it.
    long long count = partition_count_capped(pop.size(), game.sizes, guard);
    if (count > guard) {
        throw GuardExceeded("verify_equilibrium: " + std::to_string(count) +
                            " partitions exceed guard " + std::to_string(guard));
    }
    PartitionEnumerator enumerator(pop.size(), game.sizes);
    enumerator.run([&](const std::vector<std::vector<int>>& blocks) {
        ++report.partitions_checked;
        if (blocks == partition) {
            return true;
        }
        std::vector<int> alt_picks = play(blocks);
        long long utility = 0;
        for (int p : alt_picks) {
            utility += cutter_pref.level_of_position(pop, p);
        }
        long long gain = utility - report.cutter_utility;
        if (gain > 0) {
            note_deviation("cutter", "repartition to " + blocks_text(blocks), gain);
        }
        return true;
    });

    report.is_equilibrium = report.deviation_count == 0;
    return report;
}

Outcome spe_cut_and_choose(const Population& pop, const Preference& pref_i,
                           const Preference& pref_ii, const std::vector<int>& sizes,
                           Cutter cutter, long long guard) {
    validate_game_sizes(pop, sizes);
    validate_preference_fits(pop, pref_i);
    validate_preference_fits(pop, pref_ii);
    long long count = partition_count_capped(pop.size(), sizes, guard);
    if (count > guard) {
        throw GuardExceeded("spe_cut_and_choose: " + std::to_string(count) +
                            " partitions exceed guard " + std::to_string(guard));
    }

    const Preference& cutter_pref = cutter == Cutter::PlayerI ? pref_i : pref_ii;
    const Preference& chooser_pref = cutter == Cutter::PlayerI ? pref_ii : pref_i;
    ChoiceRule respond = best_response_rule(chooser_pref);

    bool found = false;
    long long best_utility = 0;
    std::vector<std::vector<int>> best_blocks;
    std::vector<int> best_picks;

    PartitionEnumerator enumerator(pop.size(), sizes);
    enumerator.run([&](const std::vector<std::vector<int>>& blocks) {
        std::vector<int> picks;
        picks.reserve(blocks.size());
        long long utility = 0;
        for (const auto& block : blocks) {
            int p = respond(pop, block);
            picks.push_back(p);
            utility += cutter_pref.level_of_position(pop, p);
        }
        // Strict improvement only: enumeration is lexicographic, so the first
        // maximizer is the lexicographically smallest one.
        if (!found || utility > best_utility) {
            found = true;
            best_utility = utility;
            best_blocks = blocks;
            best_picks = std::move(picks);
        }
        return true;
    });

    Outcome outcome;
    for (std::size_t j = 0; j < best_blocks.size(); ++j) {
        outcome.transcript.push_back({cutter == Cutter::PlayerI ? "I" : "II",
                                      "cut block " + std::to_string(j + 1) + ": positions " +
                                          blocks_text({best_blocks[j]})});
    }
    for (std::size_t j = 0; j < best_picks.size(); ++j) {
        outcome.transcript.push_back({cutter == Cutter::PlayerI ? "II" : "I",
                                      "pick position " + std::to_string(best_picks[j]) +
                                          " from block " + std::to_string(j + 1)});
    }
    outcome.sample = picks_to_sample(std::move(best_picks));
    return outcome;
}

Outcome antagonistic_benchmark(const Population& pop, const Preference& pref,
                               const std::vector<int>& sizes, bool owner_cuts) {
    validate_game_sizes(pop, sizes);
    validate_preference_fits(pop, pref);
    // Re-rank the items by the owner's preference; input order breaks ties,
    // matching the population's own tie-break convention.  In the re-ranked
    // game the owner is the high player, so it sits in Player I's seat.
    std::vector<int> levels_by_item(pref.levels());
    Population ranked = population_from_levels(levels_by_item);
    Outcome played = cut_and_choose_outcome(ranked, sizes,
                                            owner_cuts ? Cutter::PlayerI : Cutter::PlayerII);
    Outcome outcome;
    outcome.transcript.push_back(
        {"game", "benchmark played on the population re-ranked by the owner's preference"});
    for (auto& entry : played.transcript) {
        outcome.transcript.push_back(std::move(entry));
    }
    std::vector<int> original;
    original.reserve(played.sample.positions.size());
    for (int p : played.sample.positions) {
        // ranked item indices coincide with pop item indices
        original.push_back(pop.position_of_item(ranked.item_at(p)));
    }
    outcome.sample = picks_to_sample(std::move(original));
    return outcome;
}

BenchmarkComparison compare_with_benchmarks(const Population& pop, const Preference& pref_i,
                                            const Preference& pref_ii,
                                            const std::vector<int>& sizes, Cutter cutter,
                                            long long guard) {
    BenchmarkComparison result;
    result.outcome = spe_cut_and_choose(pop, pref_i, pref_ii, sizes, cutter, guard).sample;
    result.benchmark_i =
        antagonistic_benchmark(pop, pref_i, sizes, cutter == Cutter::PlayerI).sample;
    result.benchmark_ii =
        antagonistic_benchmark(pop, pref_ii, sizes, cutter == Cutter::PlayerII).sample;

    result.utility_i = canonical_utility(pop, pref_i, result.outcome);
    result.utility_i_benchmark = canonical_utility(pop, pref_i, result.benchmark_i);
    result.utility_ii = canonical_utility(pop, pref_ii, result.outcome);
    result.utility_ii_benchmark = canonical_utility(pop, pref_ii, result.benchmark_ii);
    result.utility_claim_i = result.utility_i >= result.utility_i_benchmark;

    // Distributional claim for Player II: map both samples onto the
    // population re-ranked by Player II's preference and require the played
    // outcome's CDF to sit weakly on the preferred side everywhere.
    Population ranked = population_from_levels(pref_ii.levels());
    auto map_sample = [&](const Sample& s) {
        std::vector<int> mapped;
        mapped.reserve(s.positions.size());
        for (int p : s.positions) {
            mapped.push_back(ranked.position_of_item(pop.item_at(p)));
        }
        std::sort(mapped.begin(), mapped.end());
        return Sample{std::move(mapped)};
    };
    Cdf f_outcome = sample_cdf(ranked, map_sample(result.outcome));
    Cdf f_benchmark = sample_cdf(ranked, map_sample(result.benchmark_ii));
    result.cdf_claim_ii = dominates(f_outcome, f_benchmark);
    return result;
}

}  // namespace advsel
