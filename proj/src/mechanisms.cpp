#include "advsel/mechanisms.hpp"

#include "advsel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace advsel {

namespace {

std::string positions_text(const std::vector<int>& positions) {
    std::ostringstream out;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (i > 0) {
            out << ' ';
        }
        out << positions[i];
    }
    return out.str();
}

const char* actor_name(Cutter player) { return player == Cutter::PlayerI ? "I" : "II"; }

Cutter other(Cutter player) {
    return player == Cutter::PlayerI ? Cutter::PlayerII : Cutter::PlayerI;
}

// Chooser rules.  Within a block the positions ascend, and population levels
// are non-decreasing in the position, so the lowest position is a worst item
// and the first position sharing the last item's level is a best item with
// the lowest index.
int pick_for_player_ii(const std::vector<int>& block) { return block.front(); }

int pick_for_player_i(const Population& pop, const std::vector<int>& block) {
    int top_level = pop.level_at(block.back());
    for (int p : block) {
        if (pop.level_at(p) == top_level) {
            return p;
        }
    }
    return block.back();  // unreachable
}

int chooser_pick(const Population& pop, const std::vector<int>& block, Cutter chooser) {
    return chooser == Cutter::PlayerI ? pick_for_player_i(pop, block)
                                      : pick_for_player_ii(block);
}

void validate_sizes(int n, const std::vector<int>& sizes) {
    if (sizes.empty()) {
        throw std::invalid_argument("cut and choose: no blocks");
    }
    long long total = 0;
    int prev = 1;
    for (int s : sizes) {
        if (s < 1) {
            throw std::invalid_argument("cut and choose: block sizes must be positive");
        }
        if (s < prev) {
            throw std::invalid_argument("cut and choose: block sizes must be non-decreasing");
        }
        prev = s;
        total += s;
    }
    if (total > n) {
        throw std::invalid_argument("cut and choose: block sizes exceed population size");
    }
}

// Keeps the not-yet-seen tail of a Fisher-Yates shuffle so that every random
// mechanism draws without replacement with one next_below call per item.
class PositionDeck {
  public:
    explicit PositionDeck(int n) : order_(n), used_(0) {
        std::iota(order_.begin(), order_.end(), 1);
    }

    int remaining() const { return static_cast<int>(order_.size()) - used_; }

    int draw(RandomSource& rng) {
        if (remaining() == 0) {
            throw std::logic_error("position deck exhausted");
        }
        int j = used_ + static_cast<int>(rng.next_below(remaining()));
        std::swap(order_[used_], order_[j]);
        return order_[used_++];
    }

  private:
    std::vector<int> order_;
    int used_;
};

Sample sorted_sample(std::vector<int> positions) {
    std::sort(positions.begin(), positions.end());
    return Sample{std::move(positions)};
}

unsigned long long binomial_capped(int n, int k, unsigned long long cap) {
    if (k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned long long value = 1;
    for (int i = 1; i <= k; ++i) {
        value = value * (n - k + i) / i;  // exact: product of i consecutive
                                          // integers divides by i!
        if (value > cap) {
            return cap + 1;
        }
    }
    return value;
}

Outcome overlapping_outcome(const Population& pop, const std::vector<int>& targets) {
    if (targets.empty()) {
        throw std::invalid_argument("overlapping cut and choose: no targets");
    }
    int prev = 0;
    for (int t : targets) {
        if (t <= prev || t > pop.size()) {
            throw std::invalid_argument(
                "overlapping cut and choose: targets must be strictly increasing within 1..n");
        }
        prev = t;
    }
    Outcome outcome;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        outcome.transcript.push_back(
            {"II", "offer shortlist " + std::to_string(j + 1) + ": positions 1.." +
                       std::to_string(targets[j])});
    }
    // Player I keeps the best still-available item of each shortlist.  Taking
    // the shortlists from the largest down, those bests are exactly the
    // shortlist maxima, which are distinct because the sizes strictly grow.
    for (std::size_t j = 0; j < targets.size(); ++j) {
        outcome.transcript.push_back(
            {"I", "take position " + std::to_string(targets[j]) + " from shortlist " +
                      std::to_string(j + 1)});
    }
    outcome.sample.positions = targets;
    return outcome;
}

}  // namespace

std::vector<std::vector<int>> equilibrium_partition(int n, const std::vector<int>& sizes,
                                                    Cutter cutter) {
    validate_sizes(n, sizes);
    std::vector<std::vector<int>> blocks;
    blocks.reserve(sizes.size());
    if (cutter == Cutter::PlayerI) {
        // Deal from the top: the smallest block keeps the very best items.
        int high = n;
        for (int s : sizes) {
            std::vector<int> block(s);
            std::iota(block.begin(), block.end(), high - s + 1);
            blocks.push_back(std::move(block));
            high -= s;
        }
    } else {
        int low = 0;
        for (int s : sizes) {
            std::vector<int> block(s);
            std::iota(block.begin(), block.end(), low + 1);
            blocks.push_back(std::move(block));
            low += s;
        }
    }
    return blocks;
}

Outcome cut_and_choose_outcome(const Population& pop, const std::vector<int>& sizes,
                               Cutter cutter) {
    auto blocks = equilibrium_partition(pop.size(), sizes, cutter);
    Cutter chooser = other(cutter);
    Outcome outcome;
    std::vector<int> picks;
    picks.reserve(blocks.size());
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        outcome.transcript.push_back(
            {actor_name(cutter), "cut block " + std::to_string(j + 1) + ": positions " +
                                     std::to_string(blocks[j].front()) + ".." +
                                     std::to_string(blocks[j].back())});
    }
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        int p = chooser_pick(pop, blocks[j], chooser);
        picks.push_back(p);
        outcome.transcript.push_back(
            {actor_name(chooser), "pick position " + std::to_string(p) + " from block " +
                                      std::to_string(j + 1)});
    }
    outcome.sample = sorted_sample(std::move(picks));
    return outcome;
}

Outcome quantile_outcome(const Population& pop, int k, int m, Cutter cutter) {
    if (k < 1 || m < 0) {
        throw std::invalid_argument("quantile mechanism: need k >= 1 and m >= 0");
    }
    long long n = static_cast<long long>(2 * m + 1) * k;
    if (n != pop.size()) {
        throw std::invalid_argument("quantile mechanism: population size must be (2m+1)k = " +
                                    std::to_string(n) + ", got " +
                                    std::to_string(pop.size()));
    }
    std::vector<int> sizes(k, 2 * m + 1);
    sizes[0] = m + 1;
    return cut_and_choose_outcome(pop, sizes, cutter);
}

std::pair<MechanismConfig, Outcome> implement_quantiles(const Population& pop,
                                                        const std::vector<int>& targets) {
    Outcome outcome = overlapping_outcome(pop, targets);
    MechanismConfig config;
    config.kind = MechanismKind::OverlappingCutAndChoose;
    config.k = static_cast<int>(targets.size());
    config.block_sizes = targets;
    config.cutter = Cutter::PlayerII;
    return {std::move(config), std::move(outcome)};
}

Outcome random_sample(const Population& pop, int k, RandomSource& rng) {
    if (k < 1 || k > pop.size()) {
        throw std::invalid_argument("random sample: need 1 <= k <= n");
    }
    PositionDeck deck(pop.size());
    Outcome outcome;
    std::vector<int> picks;
    picks.reserve(k);
    for (int i = 0; i < k; ++i) {
        int p = deck.draw(rng);
        picks.push_back(p);
        outcome.transcript.push_back({"chance", "draw position " + std::to_string(p)});
    }
    outcome.sample = sorted_sample(std::move(picks));

    unsigned long long support = binomial_capped(pop.size(), k, 1024);
    if (support <= 1024) {
        Rational probability(1, static_cast<long long>(support));
        std::vector<int> combo(k);
        std::iota(combo.begin(), combo.end(), 1);
        for (;;) {
            outcome.distribution.emplace_back(Sample{combo}, probability);
            int i = k - 1;
            while (i >= 0 && combo[i] == pop.size() - (k - 1 - i)) {
                --i;
            }
            if (i < 0) {
                break;
            }
            ++combo[i];
            for (int j = i + 1; j < k; ++j) {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    return outcome;
}

namespace {

// One veto round of strike and replace.  The striker's victims are fixed
// from the sample as it stands when the round opens; refills drawn during
// the round are only exposed to the other player's round.
void veto_round(std::vector<int>& current, PositionDeck& deck, RandomSource& rng, int n, int c,
                StrikeStrategy strategy, Cutter striker, std::vector<TranscriptEntry>& log) {
    std::sort(current.begin(), current.end());
    std::vector<int> struck;
    if (striker == Cutter::PlayerI) {
        // Worst items for Player I are the lowest positions.
        for (int i = 0; i < static_cast<int>(current.size()) && static_cast<int>(struck.size()) < c;
             ++i) {
            if (strategy == StrikeStrategy::Threshold && 2 * current[i] >= n + 1) {
                break;
            }
            struck.push_back(current[i]);
        }
    } else {
        for (int i = static_cast<int>(current.size()) - 1;
             i >= 0 && static_cast<int>(struck.size()) < c; --i) {
            if (strategy == StrikeStrategy::Threshold && 2 * current[i] <= n + 1) {
                break;
            }
            struck.push_back(current[i]);
        }
    }
    for (int victim : struck) {
        current.erase(std::find(current.begin(), current.end(), victim));
        int refill = deck.draw(rng);
        current.push_back(refill);
        log.push_back({actor_name(striker), "strike position " + std::to_string(victim)});
        log.push_back({"chance", "refill position " + std::to_string(refill)});
    }
}

}  // namespace

Outcome strike_and_replace(const Population& pop, int k, int c, StrikeStrategy strategy,
                           RandomSource& rng) {
    const int n = pop.size();
    if (k < 1 || c < 0 || k + 2 * c > n) {
        throw std::invalid_argument("strike and replace: need k >= 1, c >= 0 and k + 2c <= n");
    }
    PositionDeck deck(n);
    Outcome outcome;
    std::vector<int> current;
    current.reserve(k);
    for (int i = 0; i < k; ++i) {
        int p = deck.draw(rng);
        current.push_back(p);
        outcome.transcript.push_back({"chance", "draw position " + std::to_string(p)});
    }
    veto_round(current, deck, rng, n, c, strategy, Cutter::PlayerI, outcome.transcript);
    veto_round(current, deck, rng, n, c, strategy, Cutter::PlayerII, outcome.transcript);
    outcome.sample = sorted_sample(std::move(current));
    return outcome;
}

Outcome median_sample(const Population& pop, int k, int c, RandomSource& rng) {
    const int n = pop.size();
    if (k < 1 || k > n || c < 0) {
        throw std::invalid_argument("median sample: need 1 <= k <= n and c >= 0");
    }
    const int count = 2 * c + 1;
    Outcome outcome;
    std::vector<std::vector<int>> candidates(count);
    for (int t = 0; t < count; ++t) {
        PositionDeck deck(n);
        auto& cand = candidates[t];
        cand.reserve(k);
        for (int i = 0; i < k; ++i) {
            cand.push_back(deck.draw(rng));
        }
        std::sort(cand.begin(), cand.end());
        outcome.transcript.push_back(
            {"chance", "candidate " + std::to_string(t + 1) + ": positions " +
                           positions_text(cand)});
    }
    // Order by the median position; for even k the two middle positions count
    // together.  Position sum breaks ties, then draw order.
    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int t) {
        const auto& cand = candidates[t];
        long long median2 = cand[(k - 1) / 2] + cand[k / 2];
        long long sum = std::accumulate(cand.begin(), cand.end(), 0LL);
        return std::tuple(median2, sum, t);
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
    for (int i = 0; i < c; ++i) {
        outcome.transcript.push_back(
            {"I", "veto candidate " + std::to_string(order[i] + 1)});
        outcome.transcript.push_back(
            {"II", "veto candidate " + std::to_string(order[count - 1 - i] + 1)});
    }
    outcome.sample.positions = candidates[order[c]];
    return outcome;
}

Outcome median_shortlist(const Population& pop) {
    int shortlist = (pop.size() + 1) / 2;
    return cut_and_choose_outcome(pop, {shortlist}, Cutter::PlayerI);
}

Outcome random_cut_and_choose(const Population& pop,
                              const std::vector<std::vector<int>>& blocks, RandomSource& rng) {
    const int n = pop.size();
    const int k = static_cast<int>(blocks.size());
    if (k < 1) {
        throw std::invalid_argument("random cut and choose: no blocks");
    }
    const int m = static_cast<int>(blocks.front().size());
    std::vector<char> seen(n + 1, 0);
    std::vector<std::vector<int>> sorted_blocks;
    sorted_blocks.reserve(k);
    for (const auto& block : blocks) {
        if (static_cast<int>(block.size()) != m || m < 1) {
            throw std::invalid_argument("random cut and choose: blocks must share one size");
        }
        auto copy = block;
        std::sort(copy.begin(), copy.end());
        for (int p : copy) {
            if (p < 1 || p > n || seen[p]) {
                throw std::invalid_argument(
                    "random cut and choose: blocks must partition positions 1..n");
            }
            seen[p] = 1;
        }
        sorted_blocks.push_back(std::move(copy));
    }
    if (static_cast<long long>(k) * m != n) {
        throw std::invalid_argument("random cut and choose: blocks must cover the population");
    }

    Outcome outcome;
    std::vector<int> picks;
    picks.reserve(k);
    for (int j = 0; j < k; ++j) {
        int p = sorted_blocks[j][rng.next_below(m)];
        picks.push_back(p);
        outcome.transcript.push_back(
            {"chance", "block " + std::to_string(j + 1) + ": draw position " +
                           std::to_string(p)});
    }
    outcome.sample = sorted_sample(std::move(picks));

    // Tabulate the exact distribution for small supports, in odometer order
    // with the first block as the most significant digit.
    double support_estimate = std::pow(static_cast<double>(m), k);
    if (support_estimate <= 1024.5) {
        long long support = 1;
        for (int j = 0; j < k; ++j) {
            support *= m;
        }
        Rational probability(1, support);
        std::vector<int> digit(k, 0);
        for (;;) {
            std::vector<int> combo(k);
            for (int j = 0; j < k; ++j) {
                combo[j] = sorted_blocks[j][digit[j]];
            }
            outcome.distribution.emplace_back(sorted_sample(std::move(combo)), probability);
            int j = k - 1;
            while (j >= 0 && digit[j] == m - 1) {
                digit[j--] = 0;
            }
            if (j < 0) {
                break;
            }
            ++digit[j];
        }
    }
    return outcome;
}

Outcome play_mechanism(const Population& pop, const MechanismConfig& config,
                       RandomSource* rng) {
    if (mechanism_is_randomized(config.kind) && rng == nullptr) {
        throw std::invalid_argument(std::string("mechanism '") +
                                    mechanism_kind_name(config.kind) +
                                    "' requires a random source");
    }
    switch (config.kind) {
        case MechanismKind::Quantile:
            return quantile_outcome(pop, config.k, config.m, config.cutter);
        case MechanismKind::CutAndChoose:
            return cut_and_choose_outcome(pop, config.block_sizes, config.cutter);
        case MechanismKind::OverlappingCutAndChoose:
            if (config.cutter != Cutter::PlayerII) {
                throw std::invalid_argument(
                    "overlapping cut and choose: only Player II cuts in this game form");
            }
            return overlapping_outcome(pop, config.block_sizes);
        case MechanismKind::Random:
            return random_sample(pop, config.k, *rng);
        case MechanismKind::StrikeAndReplace:
            return strike_and_replace(pop, config.k, config.c, config.strike, *rng);
        case MechanismKind::MedianSample:
            return median_sample(pop, config.k, config.c, *rng);
        case MechanismKind::MedianShortlist:
            return median_shortlist(pop);
        case MechanismKind::RandomCutAndChoose: {
            if (!config.blocks.empty()) {
                return random_cut_and_choose(pop, config.blocks, *rng);
            }
            // Default to the ordered partition into k runs of consecutive
            // positions.
            if (config.k < 1 || pop.size() % config.k != 0) {
                throw std::invalid_argument(
                    "random cut and choose: k must divide n when no partition is given");
            }
            int m = pop.size() / config.k;
            std::vector<std::vector<int>> blocks(config.k);
            for (int j = 0; j < config.k; ++j) {
                blocks[j].resize(m);
                std::iota(blocks[j].begin(), blocks[j].end(), j * m + 1);
            }
            return random_cut_and_choose(pop, blocks, *rng);
        }
    }
    throw std::logic_error("unknown mechanism kind");
}

bool mechanism_is_randomized(MechanismKind kind) {
    switch (kind) {
        case MechanismKind::Random:
        case MechanismKind::StrikeAndReplace:
        case MechanismKind::MedianSample:
        case MechanismKind::RandomCutAndChoose:
            return true;
        default:
            return false;
    }
}

const char* mechanism_kind_name(MechanismKind kind) {
    switch (kind) {
        case MechanismKind::Quantile:
            return "quantile";
        case MechanismKind::CutAndChoose:
            return "cut_and_choose";
        case MechanismKind::OverlappingCutAndChoose:
            return "overlapping_cut_and_choose";
        case MechanismKind::Random:
            return "random";
        case MechanismKind::StrikeAndReplace:
            return "strike_and_replace";
        case MechanismKind::MedianSample:
            return "median_sample";
        case MechanismKind::MedianShortlist:
            return "median_shortlist";
        case MechanismKind::RandomCutAndChoose:
            return "random_cut_and_choose";
    }
    throw std::logic_error("unknown mechanism kind");
}

MechanismKind mechanism_kind_from_name(const std::string& name) {
    for (MechanismKind kind :
         {MechanismKind::Quantile, MechanismKind::CutAndChoose,
          MechanismKind::OverlappingCutAndChoose, MechanismKind::Random,
          MechanismKind::StrikeAndReplace, MechanismKind::MedianSample,
          MechanismKind::MedianShortlist, MechanismKind::RandomCutAndChoose}) {
        if (name == mechanism_kind_name(kind)) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown mechanism kind '" + name + "'");
}

}  // namespace advsel
