#include "advsel/oracle.hpp"

#include "advsel/errors.hpp"
#include "advsel/mechanisms.hpp"
#include "advsel/stats.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace advsel {

namespace {

BigInt from_u128(unsigned __int128 v) {
    BigInt hi = static_cast<std::uint64_t>(v >> 64);
    BigInt lo = static_cast<std::uint64_t>(v);
    return (hi << 64) | lo;
}

// Numerator of one statistic for a fixed (n, k): KS and L1 over denominator
// nk and n^2 k, CvM over n^3 k^2.  Comparing numerators compares statistics,
// so the scan below never touches big integers.
class StatScanner {
  public:
    StatScanner(const Population& pop, int k, StatKind stat)
        : stat_(stat), n_(pop.size()), k_(k), level_of_(n_ + 1), cx_(n_ + 1),
          cy_level_(pop.level_count() + 1) {
        for (int p = 1; p <= n_; ++p) {
            level_of_[p] = pop.level_at(p);
            cx_[p] = pop.class_end(p);
        }
    }

    unsigned __int128 numerator(const std::vector<int>& picks) {
        std::fill(cy_level_.begin(), cy_level_.end(), 0);
        for (int p : picks) {
            ++cy_level_[level_of_[p]];
        }
        for (std::size_t v = 1; v < cy_level_.size(); ++v) {
            cy_level_[v] += cy_level_[v - 1];
        }
        unsigned __int128 acc = 0;
        long long worst = 0;
        for (int p = 1; p <= n_; ++p) {
            long long gap = cx_[p] * k_ - cy_level_[level_of_[p]] * static_cast<long long>(n_);
            long long mag = gap < 0 ? -gap : gap;
            switch (stat_) {
                case StatKind::KS:
                    worst = std::max(worst, mag);
                    break;
                case StatKind::L1:
                    acc += static_cast<unsigned long long>(mag);
                    break;
                case StatKind::CvM:
                    acc += static_cast<unsigned __int128>(mag) * mag;
                    break;
            }
        }
        return stat_ == StatKind::KS ? static_cast<unsigned __int128>(worst) : acc;
    }

    Rational to_value(unsigned __int128 numerator) const {
        BigInt den;
        switch (stat_) {
            case StatKind::KS:
                den = BigInt(n_) * k_;
                break;
            case StatKind::L1:
                den = BigInt(n_) * n_ * k_;
                break;
            case StatKind::CvM:
                den = BigInt(n_) * n_ * n_ * k_ * k_;
                break;
        }
        return Rational(from_u128(numerator), den);
    }

  private:
    StatKind stat_;
    int n_;
    int k_;
    std::vector<int> level_of_;
    std::vector<long long> cx_;
    std::vector<long long> cy_level_;
};

long long binomial_capped(int n, int k, long long cap) {
    if (k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    long long value = 1;
    for (int i = 1; i <= k; ++i) {
        value = value * (n - k + i) / i;
        if (value > cap) {
            return cap + 1;
        }
    }
    return value;
}

template <typename Visitor>
void for_each_combination(int n, int k, const Visitor& visit) {
    std::vector<int> combo(k);
    std::iota(combo.begin(), combo.end(), 1);
    for (;;) {
        visit(combo);
        int i = k - 1;
        while (i >= 0 && combo[i] == n - (k - 1 - i)) {
            --i;
        }
        if (i < 0) {
            return;
        }
        ++combo[i];
        for (int j = i + 1; j < k; ++j) {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

Rational mean_of(const std::vector<Rational>& values, const std::vector<int>& indices) {
    Rational sum;
    for (int i : indices) {
        sum += values[i - 1];
    }
    return sum / Rational(static_cast<long long>(indices.size()));
}

// Population variance of the indexed values: (1/m) sum (x - mean)^2.
Rational variance_of(const std::vector<Rational>& values, const std::vector<int>& indices) {
    Rational mean = mean_of(values, indices);
    Rational sum;
    for (int i : indices) {
        Rational d = values[i - 1] - mean;
        sum += d * d;
    }
    return sum / Rational(static_cast<long long>(indices.size()));
}

void validate_equal_blocks(std::size_t value_count, const std::vector<std::vector<int>>& blocks) {
    if (blocks.empty()) {
        throw std::invalid_argument("partition moments: no blocks");
    }
    std::size_t m = blocks.front().size();
    std::vector<char> seen(value_count + 1, 0);
    for (const auto& block : blocks) {
        if (block.size() != m || m == 0) {
            throw std::invalid_argument("partition moments: blocks must share one size");
        }
        for (int i : block) {
            if (i < 1 || static_cast<std::size_t>(i) > value_count || seen[i]) {
                throw std::invalid_argument(
                    "partition moments: blocks must partition indices 1..n");
            }
            seen[i] = 1;
        }
    }
    if (blocks.size() * m != value_count) {
        throw std::invalid_argument("partition moments: blocks must cover all values");
    }
}

}  // namespace

const char* stat_kind_name(StatKind stat) {
    switch (stat) {
        case StatKind::KS:
            return "ks";
        case StatKind::L1:
            return "l1";
        case StatKind::CvM:
            return "cvm";
    }
    throw std::logic_error("unknown stat kind");
}

OptimalityReport optimal_samples_bruteforce(const Population& pop, int k, StatKind stat,
                                            long long guard) {
    const int n = pop.size();
    if (k < 1 || k > n) {
        throw std::invalid_argument("optimal_samples_bruteforce: need 1 <= k <= n");
    }
    long long total = binomial_capped(n, k, guard);
    if (total > guard) {
        throw GuardExceeded("optimal_samples_bruteforce: C(" + std::to_string(n) + "," +
                            std::to_string(k) + ") exceeds guard " + std::to_string(guard));
    }

    OptimalityReport report;
    report.stat = stat;
    report.k = k;

    StatScanner scanner(pop, k, stat);

    // Pass 1: the exact minimum.
    bool first = true;
    unsigned __int128 best = 0;
    for_each_combination(n, k, [&](const std::vector<int>& combo) {
        unsigned __int128 value = scanner.numerator(combo);
        if (first || value < best) {
            best = value;
            first = false;
        }
        ++report.samples_checked;
    });
    report.minimum = scanner.to_value(best);

    // The quantile sample exists whenever n = (2m+1)k for an integer m.
    if (n % k == 0 && (n / k) % 2 == 1) {
        int m = (n / k - 1) / 2;
        report.quantile_applicable = true;
        report.quantile_sample = quantile_outcome(pop, k, m, Cutter::PlayerI).sample;
    }

    // Pass 2: walk the minimizer set.
    report.minimizers_match_quantile_class = report.quantile_applicable;
    for_each_combination(n, k, [&](const std::vector<int>& combo) {
        if (scanner.numerator(combo) != best) {
            return;
        }
        ++report.minimizer_count;
        Sample sample{combo};
        if (report.minimizers.size() < 64) {
            report.minimizers.push_back(sample);
        }
        if (report.quantile_applicable) {
            if (samples_equivalent(pop, sample, report.quantile_sample)) {
                report.quantile_attains_minimum = true;
            } else {
                report.minimizers_match_quantile_class = false;
            }
        }
    });
    return report;
}

QuantileOptimality check_quantile_optimality(const Population& pop, int k, long long guard) {
    QuantileOptimality result;
    result.ks = optimal_samples_bruteforce(pop, k, StatKind::KS, guard);
    result.l1 = optimal_samples_bruteforce(pop, k, StatKind::L1, guard);
    result.cvm = optimal_samples_bruteforce(pop, k, StatKind::CvM, guard);
    auto good = [](const OptimalityReport& r) {
        return r.quantile_applicable && r.quantile_attains_minimum &&
               r.minimizers_match_quantile_class;
    };
    result.quantile_uniquely_optimal = good(result.ks) && good(result.l1) && good(result.cvm);
    return result;
}

PartitionMoments partition_moments(const std::vector<Rational>& values,
                                   const std::vector<std::vector<int>>& blocks,
                                   long long enum_guard) {
    validate_equal_blocks(values.size(), blocks);
    const int k = static_cast<int>(blocks.size());
    const int m = static_cast<int>(blocks.front().size());

    std::vector<int> all(values.size());
    std::iota(all.begin(), all.end(), 1);

    PartitionMoments result;
    result.mean = mean_of(values, all);
    Rational block_var_sum;
    for (const auto& block : blocks) {
        block_var_sum += variance_of(values, block);
    }
    Rational k2(static_cast<long long>(k) * k);
    result.variance_of_sample_mean = block_var_sum / k2;
    result.expected_sample_variance =
        variance_of(values, all) - result.variance_of_sample_mean;

    // Direct enumeration of all m^k samples when feasible.
    long long support = 1;
    bool small = true;
    for (int j = 0; j < k && small; ++j) {
        if (support > enum_guard / m) {
            small = false;
        } else {
            support *= m;
        }
    }
    if (small && support <= enum_guard) {
        Rational total;
        Rational mean_total;
        std::vector<int> digit(k, 0);
        std::vector<int> picks(k);
        for (;;) {
            for (int j = 0; j < k; ++j) {
                picks[j] = blocks[j][digit[j]];
            }
            total += variance_of(values, picks);
            mean_total += mean_of(values, picks);
            ++result.samples_enumerated;
            int j = k - 1;
            while (j >= 0 && digit[j] == m - 1) {
                digit[j--] = 0;
            }
            if (j < 0) {
                break;
            }
            ++digit[j];
        }
        result.enumerated = true;
        Rational support_r(static_cast<long long>(support));
        result.enumerated_mean = mean_total / support_r;
        result.enumerated_expected_sample_variance = total / support_r;
        if (result.enumerated_expected_sample_variance != result.expected_sample_variance) {
            throw std::logic_error(
                "partition moments: enumeration disagrees with the block-variance identity");
        }
        if (result.enumerated_mean != result.mean) {
            throw std::logic_error(
                "partition moments: enumerated mean disagrees with the population mean");
        }
    }
    return result;
}

void for_each_equal_partition(
    int n, int k, const std::function<bool(const std::vector<std::vector<int>>&)>& visit,
    long long guard) {
    if (k < 1 || n < 1 || n % k != 0) {
        throw std::invalid_argument("equal partitions: k must divide n");
    }
    const int m = n / k;
    // Count: product over blocks of C(remaining - 1, m - 1), since each block
    // is anchored at the smallest unassigned element.
    long long count = 1;
    for (int remaining = n; remaining > 0; remaining -= m) {
        long long ways = binomial_capped(remaining - 1, m - 1, guard);
        if (ways > guard || count > guard / std::max(ways, 1LL)) {
            throw GuardExceeded("equal partitions: count exceeds guard " +
                                std::to_string(guard));
        }
        count *= ways;
    }

    std::vector<std::vector<int>> blocks(k, std::vector<int>(m));
    std::vector<char> used(n + 1, 0);

    // Recursive lexicographic fill; returns false when the visitor stops.
    std::function<bool(int)> fill = [&](int j) -> bool {
        if (j == k) {
            return visit(blocks);
        }
        int anchor = 1;
        while (used[anchor]) {
            ++anchor;
        }
        used[anchor] = 1;
        blocks[j][0] = anchor;
        // Choose the remaining m-1 members from the unused elements above the
        // anchor, in lexicographic order.
        std::function<bool(int, int)> member = [&](int slot, int from) -> bool {
            if (slot == m) {
                return fill(j + 1);
            }
            for (int p = from; p <= n; ++p) {
                if (used[p]) {
                    continue;
                }
                used[p] = 1;
                blocks[j][slot] = p;
                bool keep_going = member(slot + 1, p + 1);
                used[p] = 0;
                if (!keep_going) {
                    return false;
                }
            }
            return true;
        };
        bool keep_going = member(1, anchor + 1);
        used[anchor] = 0;
        return keep_going;
    };
    fill(0);
}

PartitionSearchResult best_partition_bruteforce(const std::vector<Rational>& values, int k,
                                                PartitionObjective objective, long long guard) {
    const int n = static_cast<int>(values.size());
    if (k < 1 || n < 1 || n % k != 0) {
        throw std::invalid_argument("best_partition_bruteforce: k must divide n");
    }
    const int m = n / k;

    PartitionSearchResult result;
    result.objective = objective;

    auto evaluate = [&](const std::vector<std::vector<int>>& blocks) {
        Rational block_var_sum;
        for (const auto& block : blocks) {
            block_var_sum += variance_of(values, block);
        }
        Rational mean_var = block_var_sum / Rational(static_cast<long long>(k) * k);
        if (objective == PartitionObjective::SampleMeanVariance) {
            return mean_var;
        }
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 1);
        return variance_of(values, all) - mean_var;
    };

    bool first = true;
    for_each_equal_partition(
        n, k,
        [&](const std::vector<std::vector<int>>& blocks) {
            Rational value = evaluate(blocks);
            if (first || value < result.minimum) {
                result.minimum = value;
                result.argmin = blocks;
            }
            if (first || value > result.maximum) {
                result.maximum = value;
                result.argmax = blocks;
            }
            first = false;
            ++result.partitions_checked;
            return true;
        },
        guard);

    // The ordered partition: consecutive runs of the ascending value order
    // (ties by index), expressed in original indices.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a - 1] < values[b - 1]; });
    result.ordered_partition.assign(k, {});
    for (int j = 0; j < k; ++j) {
        result.ordered_partition[j].assign(order.begin() + j * m,
                                           order.begin() + (j + 1) * m);
        std::sort(result.ordered_partition[j].begin(), result.ordered_partition[j].end());
    }
    result.ordered_value = evaluate(result.ordered_partition);
    result.ordered_is_minimum = result.ordered_value == result.minimum;
    result.ordered_is_maximum = result.ordered_value == result.maximum;
    return result;
}

}  // namespace advsel
