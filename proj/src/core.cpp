#include "advsel/core.hpp"

#include "advsel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace advsel {

namespace {

std::vector<std::string> default_labels(std::size_t n, std::vector<std::string> labels) {
    if (labels.empty()) {
        labels.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels.push_back(std::to_string(i + 1));
        }
    } else if (labels.size() != n) {
        throw std::invalid_argument("population: label count does not match item count");
    }
    return labels;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

}  // namespace

// Shared tail of both factories: `order` lists input indices sorted ascending
// by rank (stably, so ties keep input order), and `same_level` says whether
// two input indices are tied.
struct PopulationAssembler {
    template <typename SameLevel>
    static Population assemble(std::vector<int> order, const SameLevel& same_level,
                               std::vector<std::string> labels, std::vector<double> values) {
        Population pop;
        const int n = static_cast<int>(order.size());
        pop.item_by_position_ = std::move(order);
        pop.position_by_item_.resize(n);
        pop.level_by_position_.resize(n);
        int level = 0;
        for (int p = 0; p < n; ++p) {
            if (p == 0 || !same_level(pop.item_by_position_[p - 1], pop.item_by_position_[p])) {
                ++level;
                pop.class_begin_.push_back(p + 1);
            }
            pop.level_by_position_[p] = level;
            pop.position_by_item_[pop.item_by_position_[p]] = p;
        }
        pop.level_count_ = level;
        pop.labels_ = std::move(labels);
        pop.values_ = std::move(values);
        return pop;
    }
};

int Population::level_at(int position) const {
    if (position < 1 || position > size()) {
        throw std::invalid_argument("population: position " + std::to_string(position) +
                                    " out of range 1.." + std::to_string(size()));
    }
    return level_by_position_[position - 1];
}

int Population::class_begin(int position) const {
    return class_begin_.at(level_at(position) - 1);
}

int Population::class_end(int position) const {
    int level = level_at(position);
    return level == level_count_ ? size() : class_begin_.at(level) - 1;
}

const std::string& Population::label_at(int position) const {
    level_at(position);  // range check with a useful message
    return labels_[item_at(position)];
}

double Population::value_at(int position) const {
    if (!has_values()) {
        throw std::invalid_argument("population: built from levels, has no numeric values");
    }
    level_at(position);  // range check with a useful message
    return values_[item_at(position)];
}

Population population_from_values(const std::vector<double>& values,
                                  std::vector<std::string> labels) {
    if (values.empty()) {
        throw std::invalid_argument("population: no items");
    }
    for (double v : values) {
        if (std::isnan(v)) {
            throw std::invalid_argument("population: NaN value");
        }
    }
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    // Ties are bitwise: items share a level iff their doubles compare equal.
    auto same = [&](int a, int b) { return values[a] == values[b]; };
    return PopulationAssembler::assemble(std::move(order), same, default_labels(values.size(), std::move(labels)),
                    values);
}

Population population_from_levels(const std::vector<int>& levels,
                                  std::vector<std::string> labels) {
    if (levels.empty()) {
        throw std::invalid_argument("population: no items");
    }
    int max_level = *std::max_element(levels.begin(), levels.end());
    std::vector<int> seen(max_level, 0);
    for (int v : levels) {
        if (v < 1) {
            throw std::invalid_argument("population: levels must start at 1");
        }
        ++seen[v - 1];
    }
    for (int v = 0; v < max_level; ++v) {
        if (seen[v] == 0) {
            throw std::invalid_argument("population: level " + std::to_string(v + 1) +
                                        " unoccupied, levels must be contiguous");
        }
    }
    std::vector<int> order(levels.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return levels[a] < levels[b]; });
    auto same = [&](int a, int b) { return levels[a] == levels[b]; };
    return PopulationAssembler::assemble(std::move(order), same, default_labels(levels.size(), std::move(labels)),
                    {});
}

Population read_population_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open population file: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("empty population file: " + path);
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    bool value_mode;
    if (line == "id,value") {
        value_mode = true;
    } else if (line == "id,level") {
        value_mode = false;
    } else {
        throw IoError("population header must be 'id,value' or 'id,level', got '" + line + "'");
    }

    std::vector<std::string> labels;
    std::vector<double> values;
    std::vector<int> levels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw IoError(path + ":" + std::to_string(line_no) + ": expected 2 fields");
        }
        labels.push_back(fields[0]);
        try {
            std::size_t used = 0;
            if (value_mode) {
                values.push_back(std::stod(fields[1], &used));
            } else {
                levels.push_back(std::stoi(fields[1], &used));
            }
            if (used != fields[1].size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw IoError(path + ":" + std::to_string(line_no) + ": bad " +
                          (value_mode ? "value" : "level") + " '" + fields[1] + "'");
        }
    }
    try {
        return value_mode ? population_from_values(values, std::move(labels))
                          : population_from_levels(levels, std::move(labels));
    } catch (const std::invalid_argument& e) {
        throw IoError(path + ": " + e.what());
    }
}

void write_population_csv(const Population& pop, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write population file: " + path);
    }
    const int n = pop.size();
    if (pop.has_values()) {
        out << "id,value\n";
        // Items go out in input order so a round trip preserves tie-breaks.
        std::vector<int> position_of(n + 1);
        for (int p = 1; p <= n; ++p) {
            position_of[pop.item_at(p)] = p;
        }
        char buf[64];
        for (int item = 0; item < n; ++item) {
            int p = position_of[item];
            std::snprintf(buf, sizeof buf, "%.17g", pop.value_at(p));
            out << pop.label_at(p) << ',' << buf << '\n';
        }
    } else {
        out << "id,level\n";
        std::vector<int> position_of(n + 1);
        for (int p = 1; p <= n; ++p) {
            position_of[pop.item_at(p)] = p;
        }
        for (int item = 0; item < n; ++item) {
            int p = position_of[item];
            out << pop.label_at(p) << ',' << pop.level_at(p) << '\n';
        }
    }
    if (!out.flush()) {
        throw IoError("failed writing population file: " + path);
    }
}

void validate_sample(const Population& pop, const Sample& sample) {
    if (sample.positions.empty()) {
        throw std::invalid_argument("sample: empty");
    }
    int prev = 0;
    for (int p : sample.positions) {
        if (p < 1 || p > pop.size()) {
            throw std::invalid_argument("sample: position " + std::to_string(p) +
                                        " out of range 1.." + std::to_string(pop.size()));
        }
        if (p <= prev) {
            throw std::invalid_argument("sample: positions must be strictly increasing");
        }
        prev = p;
    }
}

Cdf population_cdf(const Population& pop) {
    const int n = pop.size();
    Cdf cdf;
    cdf.denominator = n;
    cdf.counts.resize(n);
    for (int p = 1; p <= n; ++p) {
        cdf.counts[p - 1] = pop.class_end(p);
    }
    return cdf;
}

Cdf sample_cdf(const Population& pop, const Sample& sample) {
    validate_sample(pop, sample);
    const int n = pop.size();
    // Count sample members per level, then fold into a prefix per position.
    std::vector<long long> per_level(pop.level_count() + 1, 0);
    for (int p : sample.positions) {
        ++per_level[pop.level_at(p)];
    }
    for (int v = 1; v <= pop.level_count(); ++v) {
        per_level[v] += per_level[v - 1];
    }
    Cdf cdf;
    cdf.denominator = sample.size();
    cdf.counts.resize(n);
    for (int p = 1; p <= n; ++p) {
        cdf.counts[p - 1] = per_level[pop.level_at(p)];
    }
    return cdf;
}

bool dominates(const Cdf& a, const Cdf& b) {
    if (a.counts.size() != b.counts.size()) {
        throw std::invalid_argument("dominates: mismatched support sizes");
    }
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
        // Exact fraction comparison; counts and denominators stay well below
        // 2^31 so the cross products fit in 64 bits.
        if (a.counts[i] * b.denominator > b.counts[i] * a.denominator) {
            return false;
        }
    }
    return true;
}

bool samples_equivalent(const Population& pop, const Sample& a, const Sample& b) {
    validate_sample(pop, a);
    validate_sample(pop, b);
    if (a.size() != b.size()) {
        return false;
    }
    // Positions ascend, so the level sequences are directly comparable.
    for (int i = 0; i < a.size(); ++i) {
        if (pop.level_at(a.positions[i]) != pop.level_at(b.positions[i])) {
            return false;
        }
    }
    return true;
}

Preference::Preference(std::vector<int> level_by_item)
    : level_by_item_(std::move(level_by_item)) {
    if (level_by_item_.empty()) {
        throw std::invalid_argument("preference: no items");
    }
    int max_level = *std::max_element(level_by_item_.begin(), level_by_item_.end());
    std::vector<int> seen(max_level, 0);
    for (int v : level_by_item_) {
        if (v < 1) {
            throw std::invalid_argument("preference: levels must start at 1");
        }
        ++seen[v - 1];
    }
    for (int v = 0; v < max_level; ++v) {
        if (seen[v] == 0) {
            throw std::invalid_argument("preference: level " + std::to_string(v + 1) +
                                        " unoccupied, levels must be contiguous");
        }
    }
    level_count_ = max_level;
}

Preference preference_from_ranking(const Population& pop) {
    std::vector<int> levels(pop.size());
    for (int p = 1; p <= pop.size(); ++p) {
        levels[pop.item_at(p)] = pop.level_at(p);
    }
    return Preference(std::move(levels));
}

Preference reverse_preference(const Preference& pref) {
    std::vector<int> levels(pref.levels());
    for (int& v : levels) {
        v = pref.level_count() + 1 - v;
    }
    return Preference(std::move(levels));
}

}  // namespace advsel
