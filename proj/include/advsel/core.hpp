#pragma once

#include <optional>
#include <string>
#include <vector>

namespace advsel {

// The items a mechanism selects from.  Items are supplied in an arbitrary
// input order and carry either a real value or an explicit rank level; either
// way the population exposes a weak ranking as contiguous levels 1..L, where
// a higher level is better for the player who prefers high items.
//
// Positions are 1-based indices into the ascending sort of the population
// (position 1 is the lowest ranked item, position n the highest).  Ties keep
// input order, so every position maps to a definite item.  All public APIs
// in this library speak in these positions.
class Population {
  public:
    int size() const { return static_cast<int>(level_by_position_.size()); }
    int level_count() const { return level_count_; }
    bool has_values() const { return !values_.empty(); }

    // Rank level of the item at the given 1-based position.  Levels are
    // non-decreasing in the position.
    int level_at(int position) const;
    const std::vector<int>& levels_by_position() const { return level_by_position_; }

    // First and last position of the equivalence class holding `position`.
    int class_begin(int position) const;
    int class_end(int position) const;

    const std::string& label_at(int position) const;
    double value_at(int position) const;

    // Index of the item at `position` in the original input order (0-based),
    // and the position of input item `item` (1-based).  These let callers
    // carry per-item data (such as a preference) across a re-ranking.
    int item_at(int position) const { return item_by_position_.at(position - 1); }
    int position_of_item(int item) const { return position_by_item_.at(item) + 1; }

    friend struct PopulationAssembler;

  private:
    std::vector<int> level_by_position_;   // ascending, contiguous from 1
    std::vector<int> item_by_position_;    // position - 1 -> input index
    std::vector<int> position_by_item_;    // input index -> position - 1
    std::vector<int> class_begin_;         // level - 1 -> first position
    std::vector<std::string> labels_;      // by input index
    std::vector<double> values_;           // by input index; empty if level input
    int level_count_ = 0;
};

// Builds a population from real values.  Ties are exact: two items share a
// level iff their values compare equal as doubles.  NaN values are rejected.
// Labels are optional; defaults are "1", "2", ... by input order.
Population population_from_values(const std::vector<double>& values,
                                  std::vector<std::string> labels = {});

// Builds a population from explicit rank levels.  Levels must form a
// contiguous range 1..L with every level occupied.
Population population_from_levels(const std::vector<int>& levels,
                                  std::vector<std::string> labels = {});

// CSV interchange: header "id,value" or "id,level", one item per row, row
// order supplies the tie-breaking input order.
Population read_population_csv(const std::string& path);
void write_population_csv(const Population& pop, const std::string& path);

// A selected subset, stored as strictly increasing 1-based positions.
struct Sample {
    std::vector<int> positions;

    int size() const { return static_cast<int>(positions.size()); }
    friend bool operator==(const Sample&, const Sample&) = default;
};

// Throws std::invalid_argument unless `sample` is strictly increasing and
// within 1..n.
void validate_sample(const Population& pop, const Sample& sample);

// A distribution function over the n support points, stored exactly as
// integer counts over a common denominator: the value at position i is
// counts[i-1] / denominator.
struct Cdf {
    std::vector<long long> counts;
    long long denominator = 1;

    friend bool operator==(const Cdf&, const Cdf&) = default;
};

// F_x: counts[i-1] = number of items ranked at or below the item at
// position i, denominator n.  Within a tie class the count is constant and
// equal to the class end.
Cdf population_cdf(const Population& pop);

// F_y: counts[i-1] = number of sample members ranked at or below the item at
// position i, denominator k.
Cdf sample_cdf(const Population& pop, const Sample& sample);

// True iff `a` first-order stochastically dominates `b`: pointwise
// a(i) <= b(i) as exact fractions.  Requires equal support size.
bool dominates(const Cdf& a, const Cdf& b);

// True iff the two samples occupy the same rank levels with the same
// multiplicities, i.e. they are interchangeable for every statistic and
// every canonical utility.
bool samples_equivalent(const Population& pop, const Sample& a, const Sample& b);

// A player's weak ranking of the items, as contiguous levels 1..L by input
// item index.  Higher level means more preferred by the owner.
class Preference {
  public:
    // Validates contiguity: every level 1..max occupied.
    explicit Preference(std::vector<int> level_by_item);

    int level_of_item(int item) const { return level_by_item_.at(item); }
    int level_of_position(const Population& pop, int position) const {
        return level_by_item_.at(pop.item_at(position));
    }
    int level_count() const { return level_count_; }
    int item_count() const { return static_cast<int>(level_by_item_.size()); }
    const std::vector<int>& levels() const { return level_by_item_; }

  private:
    std::vector<int> level_by_item_;
    int level_count_ = 0;
};

// The preference that agrees with the population's own ranking.
Preference preference_from_ranking(const Population& pop);

// The fully opposed preference: level v becomes L + 1 - v.
Preference reverse_preference(const Preference& pref);

}  // namespace advsel
