#include "advsel/simulation.hpp"

#include "advsel/errors.hpp"
#include "advsel/random.hpp"
#include "advsel/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>

namespace advsel {

namespace {

// Runs `tasks` closures indexed 0..count-1 on up to `threads` workers.  Each
// task owns a distinct output slot, so the result is independent of the
// scheduling.
template <typename Task>
void parallel_for(long long count, int threads, const Task& task) {
    threads = std::max(1, static_cast<int>(std::min<long long>(threads, count)));
    if (threads == 1) {
        for (long long i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                long long i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                task(i);
            }
        });
    }
    for (auto& worker : pool) {
        worker.join();
    }
}

std::string stream_label(const std::string& mechanism_id) {
    return "mechanism:" + mechanism_id;
}

}  // namespace

int resolve_thread_count(std::optional<int> requested) {
    if (requested && *requested > 0) {
        return *requested;
    }
    if (const char* env = std::getenv("ADVSEL_THREADS")) {
        int value = std::atoi(env);
        if (value > 0) {
            return value;
        }
    }
    return 1;
}

std::vector<RepRecord> run_comparison(const Population& pop, const ExperimentConfig& config,
                                      int threads) {
    if (config.replicates < 1) {
        throw std::invalid_argument("run_comparison: need at least one replicate");
    }
    if (config.mechanisms.empty()) {
        throw std::invalid_argument("run_comparison: no mechanisms");
    }
    for (std::size_t i = 0; i < config.mechanisms.size(); ++i) {
        for (std::size_t j = i + 1; j < config.mechanisms.size(); ++j) {
            if (config.mechanisms[i].id == config.mechanisms[j].id) {
                throw std::invalid_argument("run_comparison: duplicate mechanism id '" +
                                            config.mechanisms[i].id + "'");
            }
        }
    }

    const Cdf fx = population_cdf(pop);
    const long long reps = config.replicates;
    const long long total = static_cast<long long>(config.mechanisms.size()) * reps;
    std::vector<RepRecord> records(total);

    parallel_for(total, threads, [&](long long index) {
        const auto& run = config.mechanisms[index / reps];
        const int rep = static_cast<int>(index % reps);
        RepRecord& record = records[index];
        record.mechanism = run.id;
        record.replicate = rep;
        if (mechanism_is_randomized(run.config.kind)) {
            RandomStream rng(config.seed, stream_label(run.id), rep);
            record.sample = play_mechanism(pop, run.config, &rng).sample;
        } else {
            record.sample = play_mechanism(pop, run.config, nullptr).sample;
        }
        Cdf fy = sample_cdf(pop, record.sample);
        record.ks = ks_from_cdfs(fx, fy);
        record.l1 = l1_from_cdfs(fx, fy);
        record.cvm = cvm_from_cdfs(fx, fy);
    });
    return records;
}

Population standard_normal_population(int n, std::uint64_t seed) {
    if (n < 1) {
        throw std::invalid_argument("standard_normal_population: need n >= 1");
    }
    RandomStream stream(seed, "population");
    std::vector<double> values(n);
    for (double& v : values) {
        v = stream.next_normal();
    }
    return population_from_values(values);
}

CalibrationResult calibrate_equivalent_n(const Population& pop, int k, int m, int replicates,
                                         double tolerance, std::uint64_t seed, int threads) {
    const int n = pop.size();
    if (static_cast<long long>(2 * m + 1) * k != n) {
        throw std::invalid_argument("calibrate_equivalent_n: population size must be (2m+1)k");
    }
    if (replicates < 1 || tolerance < 0) {
        throw std::invalid_argument("calibrate_equivalent_n: bad replicates or tolerance");
    }

    CalibrationResult result;
    result.target = Rational(m, n);
    result.replicates = replicates;
    const double target = result.target.to_double();
    const Cdf fx = population_cdf(pop);

    std::map<int, Rational> cache;
    auto mean_ks_at = [&](int s) -> const Rational& {
        auto it = cache.find(s);
        if (it != cache.end()) {
            return it->second;
        }
        std::vector<Rational> values(replicates);
        parallel_for(replicates, threads, [&](long long rep) {
            RandomStream rng(seed, "calibrate:" + std::to_string(s),
                             static_cast<std::uint64_t>(rep));
            Sample sample = random_sample(pop, s, rng).sample;
            values[rep] = ks_from_cdfs(fx, sample_cdf(pop, sample));
        });
        Rational sum;
        for (const Rational& v : values) {
            sum += v;
        }
        ++result.evaluations;
        return cache.emplace(s, sum / Rational(replicates)).first->second;
    };

    // Mean KS decreases in s; find the smallest s that is not above the band.
    int lo = 1;
    int hi = n;
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (mean_ks_at(mid).to_double() <= target + tolerance) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }

    auto in_band = [&](int s) {
        double mean = mean_ks_at(s).to_double();
        return mean >= target - tolerance && mean <= target + tolerance;
    };
    int found = 0;
    if (in_band(lo)) {
        found = lo;
    } else {
        // Monte Carlo noise can push the crossing point off by a little; scan
        // a neighborhood for the smallest size inside the band.
        for (int radius = 1; radius <= 64 && found == 0; ++radius) {
            int below = lo - radius;
            int above = lo + radius;
            if (below >= 1 && in_band(below)) {
                found = below;
            } else if (above <= n && in_band(above)) {
                found = above;
            }
        }
        // Prefer the smallest in-band size near the crossing.
        while (found > 1 && in_band(found - 1)) {
            --found;
        }
    }
    if (found == 0) {
        throw std::runtime_error(
            "calibrate_equivalent_n: no sample size reaches the target band");
    }
    result.equivalent_n = found;
    result.mean_ks = cache.at(found);
    return result;
}

std::vector<KsSummary> summarize_ks(const std::vector<RepRecord>& records) {
    // Group by mechanism, keeping first-appearance order.
    std::vector<KsSummary> rows;
    std::map<std::string, std::vector<Rational>> values;
    std::vector<std::string> order;
    for (const auto& record : records) {
        auto [it, inserted] = values.try_emplace(record.mechanism);
        if (inserted) {
            order.push_back(record.mechanism);
        }
        it->second.push_back(record.ks);
    }
    for (const auto& id : order) {
        auto& v = values[id];
        std::sort(v.begin(), v.end());
        KsSummary row;
        row.mechanism = id;
        row.count = static_cast<long long>(v.size());
        Rational sum;
        for (const Rational& x : v) {
            sum += x;
        }
        row.mean = sum / Rational(row.count);
        row.min = v.front();
        row.max = v.back();
        // Lower empirical quantiles.
        row.q25 = v[(v.size() - 1) / 4];
        row.median = v[(v.size() - 1) / 2];
        row.q75 = v[3 * (v.size() - 1) / 4];
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write file: " + path);
    }
    return out;
}

void close_out(std::ofstream& out, const std::string& path) {
    if (!out.flush()) {
        throw IoError("failed writing file: " + path);
    }
}

std::string positions_field(const Sample& sample) {
    std::string text;
    for (std::size_t i = 0; i < sample.positions.size(); ++i) {
        if (i > 0) {
            text += ';';
        }
        text += std::to_string(sample.positions[i]);
    }
    return text;
}

}  // namespace

void write_records_csv(const std::vector<RepRecord>& records, const std::string& path) {
    auto out = open_out(path);
    out << "mechanism,rep,ks,l1,cvm,ks_exact,l1_exact,cvm_exact,positions\n";
    for (const auto& r : records) {
        out << r.mechanism << ',' << r.replicate << ',' << r.ks.to_decimal_string() << ','
            << r.l1.to_decimal_string() << ',' << r.cvm.to_decimal_string() << ','
            << r.ks.to_fraction_string() << ',' << r.l1.to_fraction_string() << ','
            << r.cvm.to_fraction_string() << ',' << positions_field(r.sample) << '\n';
    }
    close_out(out, path);
}

void write_ks_csv(const std::vector<RepRecord>& records, const std::string& path) {
    auto out = open_out(path);
    out << "mechanism,rep,ks\n";
    for (const auto& r : records) {
        out << r.mechanism << ',' << r.replicate << ',' << r.ks.to_decimal_string() << '\n';
    }
    close_out(out, path);
}

void write_ks_summary_csv(const std::vector<RepRecord>& records, const std::string& path) {
    auto out = open_out(path);
    out << "mechanism,count,mean,min,q25,median,q75,max\n";
    for (const auto& row : summarize_ks(records)) {
        out << row.mechanism << ',' << row.count << ',' << row.mean.to_decimal_string() << ','
            << row.min.to_decimal_string() << ',' << row.q25.to_decimal_string() << ','
            << row.median.to_decimal_string() << ',' << row.q75.to_decimal_string() << ','
            << row.max.to_decimal_string() << '\n';
    }
    close_out(out, path);
}

void write_cdf_overlay_csv(const Population& pop, const Sample& sample,
                           const std::string& path) {
    if (!pop.has_values()) {
        throw std::invalid_argument("cdf overlay: population has no numeric values");
    }
    validate_sample(pop, sample);
    const Cdf fx = population_cdf(pop);
    const Cdf fy = sample_cdf(pop, sample);
    auto out = open_out(path);
    out << "sorted_value,F_x,F_y\n";
    char buf[64];
    for (int p = 1; p <= pop.size(); ++p) {
        std::snprintf(buf, sizeof buf, "%.12g", pop.value_at(p));
        Rational x(fx.counts[p - 1], fx.denominator);
        Rational y(fy.counts[p - 1], fy.denominator);
        out << buf << ',' << x.to_decimal_string() << ',' << y.to_decimal_string() << '\n';
    }
    close_out(out, path);
}

BenchmarkExperimentResult run_benchmark_experiment(const Population& pop,
                                                   const BenchmarkExperimentConfig& config) {
    if (pop.size() != config.n) {
        throw std::invalid_argument("benchmark experiment: population size mismatch");
    }
    if (static_cast<long long>(2 * config.m + 1) * config.k != config.n) {
        throw std::invalid_argument("benchmark experiment: need n = (2m+1)k");
    }

    BenchmarkExperimentResult result;
    result.calibration = calibrate_equivalent_n(pop, config.k, config.m, config.replicates,
                                                config.tolerance, config.seed, config.threads);

    auto make = [&](const std::string& id, MechanismKind kind) {
        MechanismRun run;
        run.id = id;
        run.config.kind = kind;
        run.config.k = config.k;
        run.config.m = config.m;
        run.config.c = config.c;
        run.config.cutter = Cutter::PlayerI;
        return run;
    };
    ExperimentConfig experiment;
    experiment.seed = config.seed;
    experiment.replicates = config.replicates;
    experiment.mechanisms.push_back(make("quantile", MechanismKind::Quantile));
    experiment.mechanisms.push_back(make("random", MechanismKind::Random));
    experiment.mechanisms.push_back(make("strike_and_replace", MechanismKind::StrikeAndReplace));
    experiment.mechanisms.push_back(make("median_sample", MechanismKind::MedianSample));
    MechanismRun equivalent = make("random_equivalent", MechanismKind::Random);
    equivalent.config.k = result.calibration.equivalent_n;
    experiment.mechanisms.push_back(std::move(equivalent));

    result.records = run_comparison(pop, experiment, config.threads);
    result.experiment = std::move(experiment);
    return result;
}

}  // namespace advsel
