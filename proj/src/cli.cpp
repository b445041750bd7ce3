#include "advsel/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "advsel/core.hpp"
#include "advsel/errors.hpp"
#include "advsel/gametheory.hpp"
#include "advsel/mechanisms.hpp"
#include "advsel/oracle.hpp"
#include "advsel/random.hpp"
#include "advsel/serialize.hpp"
#include "advsel/simulation.hpp"
#include "advsel/stats.hpp"

namespace advsel {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct PopulationArgs {
    std::string path;
    int normal_n = 0;
};

void add_population_options(CLI::App* cmd, PopulationArgs* args) {
    auto* file = cmd->add_option("--population", args->path, "Population CSV (id,value or id,level)");
    auto* normal = cmd->add_option("--normal", args->normal_n,
                                   "Generate a standard normal population of this size instead of reading a file");
    file->excludes(normal);
    normal->excludes(file);
}

Population load_population(const PopulationArgs& args, std::uint64_t seed) {
    if (!args.path.empty()) return read_population_csv(args.path);
    if (args.normal_n > 0) return standard_normal_population(args.normal_n, seed);
    throw std::invalid_argument("either --population or --normal is required");
}

Json population_source_json(const PopulationArgs& args, std::uint64_t seed) {
    Json j;
    if (!args.path.empty()) {
        j["source"] = "file";
        j["path"] = args.path;
    } else {
        j["source"] = "standard_normal";
        j["n"] = args.normal_n;
        j["seed"] = seed;
    }
    return j;
}

void emit_json(const Json& value, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << value.dump(2) << "\n";
    } else {
        write_json_file(value, out_path);
    }
}

std::vector<std::vector<int>> parse_blocks(const std::string& text) {
    std::vector<std::vector<int>> blocks;
    std::stringstream outer(text);
    std::string group;
    while (std::getline(outer, group, '|')) {
        std::vector<int> block;
        std::stringstream inner(group);
        std::string field;
        while (std::getline(inner, field, ',')) {
            size_t used = 0;
            int value = std::stoi(field, &used);
            if (used != field.size()) throw std::invalid_argument("bad block entry '" + field + "'");
            block.push_back(value);
        }
        if (block.empty()) throw std::invalid_argument("empty block in --blocks");
        blocks.push_back(std::move(block));
    }
    if (blocks.empty()) throw std::invalid_argument("--blocks must name at least one block");
    return blocks;
}

// ----- select ----------------------------------------------------------

struct SelectArgs {
    PopulationArgs pop;
    std::string mechanism = "quantile";
    int k = 0;
    int m = 0;
    int c = 0;
    std::vector<int> sizes;
    std::string blocks_text;
    std::string cutter = "I";
    std::string strike = "unconditional";
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_path;
    std::string transcript_path;
};

int run_select(const SelectArgs& args, std::ostream& out) {
    Population pop = load_population(args.pop, args.seed);
    MechanismConfig config;
    config.kind = mechanism_kind_from_name(args.mechanism);
    config.k = args.k;
    config.m = args.m;
    config.c = args.c;
    config.block_sizes = args.sizes;
    config.cutter = cutter_from_name(args.cutter);
    if (args.strike == "threshold")
        config.strike = StrikeStrategy::Threshold;
    else if (args.strike != "unconditional")
        throw std::invalid_argument("--strike must be unconditional or threshold");
    if (!args.blocks_text.empty()) config.blocks = parse_blocks(args.blocks_text);
    if (args.seed_given) config.seed = args.seed;

    std::optional<RandomStream> rng;
    if (mechanism_is_randomized(config.kind)) {
        if (!args.seed_given) throw std::invalid_argument("--seed is required for randomized mechanisms");
        rng.emplace(args.seed, "mechanism:" + std::string(mechanism_kind_name(config.kind)), 0);
    }
    Outcome outcome = play_mechanism(pop, config, rng ? &*rng : nullptr);

    Json result;
    result["command"] = "select";
    result["population"] = population_source_json(args.pop, args.seed);
    result["config"] = to_json(config);
    result["positions"] = outcome.sample.positions;
    Json items = Json::array();
    for (int p : outcome.sample.positions) {
        Json item;
        item["position"] = p;
        item["id"] = pop.label_at(p);
        item["level"] = pop.level_at(p);
        if (pop.has_values()) item["value"] = pop.value_at(p);
        items.push_back(std::move(item));
    }
    result["items"] = std::move(items);
    Json stats;
    stats["ks"] = to_json(ks_stat(pop, outcome.sample));
    stats["l1"] = to_json(l1_stat(pop, outcome.sample));
    stats["cvm"] = to_json(cvm_stat(pop, outcome.sample));
    result["stats"] = std::move(stats);
    if (!outcome.distribution.empty()) {
        Json dist = Json::array();
        for (const auto& [sample, prob] : outcome.distribution) {
            Json row;
            row["positions"] = sample.positions;
            row["probability"] = to_json(prob);
            dist.push_back(std::move(row));
        }
        result["distribution"] = std::move(dist);
    }
    Json transcript = Json::array();
    for (const auto& entry : outcome.transcript) transcript.push_back(to_json(entry));
    result["transcript"] = std::move(transcript);

    if (!args.transcript_path.empty()) write_transcript_jsonl(outcome.transcript, args.transcript_path);
    emit_json(result, args.out_path, out);
    return kExitOk;
}

// ----- compare ---------------------------------------------------------

struct CompareArgs {
    PopulationArgs pop;
    std::string config_path;
    std::vector<std::string> mechanisms;
    int k = 0;
    int m = 0;
    int c = 0;
    int reps = 1000;
    std::uint64_t seed = 0;
    std::string out_prefix;
    std::optional<int> threads;
    std::string format = "csv";
};

ExperimentConfig build_compare_config(const CompareArgs& args) {
    if (!args.config_path.empty()) return experiment_config_from_json(read_json_file(args.config_path));
    ExperimentConfig config;
    config.seed = args.seed;
    config.replicates = args.reps;
    for (const std::string& name : args.mechanisms) {
        MechanismRun run;
        run.id = name;
        run.config.kind = mechanism_kind_from_name(name);
        run.config.k = args.k;
        run.config.m = args.m;
        run.config.c = args.c;
        run.config.seed = args.seed;
        config.mechanisms.push_back(std::move(run));
    }
    return config;
}

int run_compare(const CompareArgs& args, std::ostream& out) {
    if (args.out_prefix.empty()) throw std::invalid_argument("--out prefix is required for compare");
    if (args.format != "csv" && args.format != "json")
        throw std::invalid_argument("--format must be csv or json");
    ExperimentConfig config = build_compare_config(args);
    if (config.mechanisms.empty()) throw std::invalid_argument("no mechanisms configured");
    Population pop = load_population(args.pop, config.seed);
    int threads = resolve_thread_count(args.threads);
    std::vector<RepRecord> records = run_comparison(pop, config, threads);

    std::vector<std::string> outputs;
    std::string records_path;
    if (args.format == "csv") {
        records_path = args.out_prefix + "_records.csv";
        write_records_csv(records, records_path);
    } else {
        records_path = args.out_prefix + "_records.json";
        Json rows = Json::array();
        for (const RepRecord& rec : records) {
            Json row;
            row["mechanism"] = rec.mechanism;
            row["rep"] = rec.replicate;
            row["positions"] = rec.sample.positions;
            row["ks"] = to_json(rec.ks);
            row["l1"] = to_json(rec.l1);
            row["cvm"] = to_json(rec.cvm);
            rows.push_back(std::move(row));
        }
        write_json_file(rows, records_path);
    }
    outputs.push_back(records_path);
    std::string summary_path = args.out_prefix + "_summary.csv";
    write_ks_summary_csv(records, summary_path);
    outputs.push_back(summary_path);

    Json manifest_config;
    manifest_config["command"] = "compare";
    manifest_config["population"] = population_source_json(args.pop, config.seed);
    manifest_config["experiment"] = to_json(config);
    manifest_config["format"] = args.format;
    Json manifest = make_manifest(manifest_config, outputs);
    std::string manifest_path = args.out_prefix + "_manifest.json";
    write_json_file(manifest, manifest_path);

    Json summary;
    summary["command"] = "compare";
    summary["records"] = records_path;
    summary["summary"] = summary_path;
    summary["manifest"] = manifest_path;
    summary["replicates"] = config.replicates;
    summary["threads"] = threads;
    out << summary.dump(2) << "\n";
    return kExitOk;
}

// ----- verify ----------------------------------------------------------

struct Theorem1Args {
    std::vector<int> n_values{3, 9, 15, 10};
    std::vector<int> k_values{1, 3, 3, 2};
    int weak_trials = 0;
    int weak_max_n = 16;
    std::uint64_t seed = 0;
    long long guard = 10'000'000;
    std::string out_path;
};

Json quantile_instance_json(const Population& pop, int k, long long guard, bool* ok) {
    QuantileOptimality opt = check_quantile_optimality(pop, k, guard);
    Json j;
    j["n"] = pop.size();
    j["k"] = k;
    j["ks"] = to_json(opt.ks);
    j["l1"] = to_json(opt.l1);
    j["cvm"] = to_json(opt.cvm);
    j["quantile_uniquely_optimal"] = opt.quantile_uniquely_optimal;
    bool instance_ok = opt.ks.minimizers_match_quantile_class && opt.l1.minimizers_match_quantile_class &&
                       opt.cvm.minimizers_match_quantile_class;
    j["pass"] = instance_ok;
    if (!instance_ok) *ok = false;
    return j;
}

int run_theorem1(const Theorem1Args& args, std::ostream& out) {
    if (args.n_values.size() != args.k_values.size())
        throw std::invalid_argument("--n and --k need the same number of entries");
    bool ok = true;
    Json result;
    result["command"] = "verify theorem1";
    Json instances = Json::array();
    Json closed_forms = Json::array();
    for (size_t i = 0; i < args.n_values.size(); ++i) {
        int n = args.n_values[i];
        int k = args.k_values[i];
        std::vector<double> values(n);
        for (int v = 0; v < n; ++v) values[v] = v + 1;
        Population pop = population_from_values(values);
        instances.push_back(quantile_instance_json(pop, k, args.guard, &ok));
        if (n % k == 0 && (n / k) % 2 == 1) {
            int m = (n / k - 1) / 2;
            QuantileClosedForms forms = quantile_closed_forms(n, k, m);
            QuantileOptimality opt = check_quantile_optimality(pop, k, args.guard);
            Json j;
            j["n"] = n;
            j["k"] = k;
            j["m"] = m;
            j["ks_closed_form"] = to_json(forms.ks);
            j["l1_closed_form"] = to_json(forms.l1);
            j["cvm_closed_form"] = to_json(forms.cvm);
            bool match = opt.ks.minimum == forms.ks && opt.l1.minimum == forms.l1 && opt.cvm.minimum == forms.cvm;
            j["matches_oracle"] = match;
            Rational variant = Rational(2 * static_cast<long long>(m) * (m + 1)) /
                               Rational(static_cast<long long>(n) * n);
            j["cvm_rejected_variant"] = "2m(m+1)/n^2";
            j["cvm_rejected_variant_value"] = to_json(variant);
            j["cvm_rejected_variant_matches_oracle"] = (variant == opt.cvm.minimum);
            closed_forms.push_back(std::move(j));
            if (!match) ok = false;
        }
    }
    result["instances"] = std::move(instances);
    result["closed_forms"] = std::move(closed_forms);
    if (args.weak_trials > 0) {
        RandomStream rng(args.seed, "verify:theorem1", 0);
        Json weak = Json::array();
        int failures = 0;
        for (int t = 0; t < args.weak_trials; ++t) {
            // Draw a valid shape first: k blocks of odd width 2m+1 within the cap.
            int k = 1 + static_cast<int>(rng.next_below(4));
            int max_m = (args.weak_max_n / k - 1) / 2;
            if (max_m < 0) max_m = 0;
            int m = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_m) + 1));
            int n = (2 * m + 1) * k;
            Population pop = population_from_levels(random_contiguous_levels(n, rng));
            bool trial_ok = true;
            Json j = quantile_instance_json(pop, k, args.guard, &trial_ok);
            j["trial"] = t;
            j["levels"] = pop.levels_by_position();
            if (!trial_ok) {
                ++failures;
                ok = false;
                weak.push_back(std::move(j));
            } else if (weak.size() < 5) {
                weak.push_back(std::move(j));
            }
        }
        result["weak_trials"] = args.weak_trials;
        result["weak_failures"] = failures;
        result["weak_examples"] = std::move(weak);
    }
    result["pass"] = ok;
    emit_json(result, args.out_path, out);
    return ok ? kExitOk : kExitCounterexample;
}

struct Theorem2Args {
    int trials = 100;
    int max_n = 12;
    std::uint64_t seed = 0;
    std::string out_path;
};

int run_theorem2(const Theorem2Args& args, std::ostream& out) {
    RandomStream rng(args.seed, "verify:theorem2", 0);
    bool ok = true;
    int failures = 0;
    Json examples = Json::array();
    for (int t = 0; t < args.trials; ++t) {
        int n = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(args.max_n)));
        int k = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        // Random strictly increasing targets: a k-subset of 1..n.
        std::vector<int> deck(n);
        for (int i = 0; i < n; ++i) deck[i] = i + 1;
        for (int i = 0; i < k; ++i) {
            int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
            std::swap(deck[i], deck[j]);
        }
        std::vector<int> targets(deck.begin(), deck.begin() + k);
        std::sort(targets.begin(), targets.end());
        Population pop = population_from_levels(random_strict_levels(n, rng));
        auto [config, outcome] = implement_quantiles(pop, targets);
        Outcome replay = play_mechanism(pop, config, nullptr);
        bool exact = outcome.sample.positions == targets && replay.sample.positions == targets;
        if (!exact) {
            ok = false;
            ++failures;
            Json j;
            j["trial"] = t;
            j["n"] = n;
            j["targets"] = targets;
            j["positions"] = outcome.sample.positions;
            examples.push_back(std::move(j));
        }
    }
    Json result;
    result["command"] = "verify theorem2";
    result["trials"] = args.trials;
    result["failures"] = failures;
    result["counterexamples"] = std::move(examples);
    result["pass"] = ok;
    emit_json(result, args.out_path, out);
    return ok ? kExitOk : kExitCounterexample;
}

struct Theorem3Args {
    int n = 6;
    std::vector<int> sizes{2, 3};
    int trials = 200;
    std::uint64_t seed = 0;
    long long guard = 10'000'000;
    std::string out_path;
};

int run_theorem3(const Theorem3Args& args, std::ostream& out) {
    RandomStream rng(args.seed, "verify:theorem3", 0);
    bool ok = true;
    int utility_failures = 0;
    int cdf_failures = 0;
    Json examples = Json::array();
    Population pop = population_from_levels([&] {
        std::vector<int> levels(args.n);
        for (int i = 0; i < args.n; ++i) levels[i] = i + 1;
        return levels;
    }());
    for (int t = 0; t < args.trials; ++t) {
        Preference pref_i(random_contiguous_levels(args.n, rng));
        Preference pref_ii(random_contiguous_levels(args.n, rng));
        for (Cutter cutter : {Cutter::PlayerI, Cutter::PlayerII}) {
            BenchmarkComparison cmp =
                compare_with_benchmarks(pop, pref_i, pref_ii, args.sizes, cutter, args.guard);
            if (!cmp.utility_claim_i) ++utility_failures;
            if (!cmp.cdf_claim_ii) ++cdf_failures;
            if (!cmp.utility_claim_i || !cmp.cdf_claim_ii) {
                ok = false;
                if (examples.size() < 10) {
                    Json j;
                    j["trial"] = t;
                    j["cutter"] = cutter == Cutter::PlayerI ? "I" : "II";
                    j["pref_i"] = pref_i.levels();
                    j["pref_ii"] = pref_ii.levels();
                    j["comparison"] = to_json(cmp);
                    examples.push_back(std::move(j));
                }
            }
        }
    }
    Json result;
    result["command"] = "verify theorem3";
    result["n"] = args.n;
    result["sizes"] = args.sizes;
    result["trials"] = args.trials;
    result["utility_claim_failures"] = utility_failures;
    result["cdf_claim_failures"] = cdf_failures;
    result["counterexamples"] = std::move(examples);
    result["pass"] = ok;
    emit_json(result, args.out_path, out);
    return ok ? kExitOk : kExitCounterexample;
}

struct Theorem4Args {
    std::uint64_t seed = 0;
    std::string out_path;
};

Json theorem4_instance(int n, int k, RandomSource& rng, bool* ok) {
    // Random integer values with repeats allowed, so ties are exercised.
    std::vector<Rational> values(n);
    for (int i = 0; i < n; ++i)
        values[i] = Rational(static_cast<long long>(rng.next_below(7)) - 3);
    Rational mean;
    for (const Rational& v : values) mean += v;
    mean = mean / Rational(n);

    bool all_match = true;
    long long partitions = 0;
    for_each_equal_partition(n, k, [&](const std::vector<std::vector<int>>& blocks) {
        PartitionMoments moments = partition_moments(values, blocks);
        ++partitions;
        if (!(moments.mean == mean)) all_match = false;
        if (!moments.enumerated) all_match = false;
        if (moments.enumerated && !(moments.enumerated_expected_sample_variance == moments.expected_sample_variance))
            all_match = false;
        if (moments.enumerated && !(moments.enumerated_mean == mean)) all_match = false;
        return true;
    });
    if (!all_match) *ok = false;
    Json j;
    j["n"] = n;
    j["k"] = k;
    j["partitions"] = partitions;
    Json vals = Json::array();
    for (const Rational& v : values) vals.push_back(v.to_fraction_string());
    j["values"] = std::move(vals);
    j["mean_invariant"] = all_match;
    j["identity_matches_enumeration"] = all_match;
    return j;
}

int run_theorem4(const Theorem4Args& args, std::ostream& out) {
    RandomStream rng(args.seed, "verify:theorem4", 0);
    bool ok = true;
    Json result;
    result["command"] = "verify theorem4";
    Json instances = Json::array();
    instances.push_back(theorem4_instance(8, 2, rng, &ok));
    instances.push_back(theorem4_instance(9, 3, rng, &ok));
    result["instances"] = std::move(instances);

    // Directional behavior of the ordered (consecutive) partition, reported
    // but not gated: on values 1,2,3,4 with k = 2 the ordered partition
    // {1,2},{3,4} maximizes the expected sample variance (9/8) while
    // {1,4},{2,3} attains the minimum (5/8).
    std::vector<Rational> probe{Rational(1), Rational(2), Rational(3), Rational(4)};
    PartitionSearchResult search =
        best_partition_bruteforce(probe, 2, PartitionObjective::ExpectedSampleVariance);
    result["ordered_partition_report"] = to_json(search);
    result["pass"] = ok;
    emit_json(result, args.out_path, out);
    return ok ? kExitOk : kExitCounterexample;
}

struct EquilibriumArgs {
    PopulationArgs pop;
    std::vector<int> sizes;
    std::string cutter = "I";
    std::uint64_t seed = 0;
    long long guard = 10'000'000;
    std::string out_path;
};

int run_verify_equilibrium(const EquilibriumArgs& args, std::ostream& out) {
    Population pop = load_population(args.pop, args.seed);
    if (args.sizes.empty()) throw std::invalid_argument("--sizes is required");
    Preference pref_i = preference_from_ranking(pop);
    Preference pref_ii = reverse_preference(pref_i);
    CutAndChooseGame game{pop, pref_i, pref_ii, args.sizes, cutter_from_name(args.cutter)};
    std::vector<std::vector<int>> partition = equilibrium_partition(pop.size(), args.sizes, game.cutter);
    Preference chooser_pref = game.cutter == Cutter::PlayerI ? game.pref_ii : game.pref_i;
    EquilibriumReport report = verify_equilibrium(game, partition, best_response_rule(chooser_pref), args.guard);
    Json result;
    result["command"] = "verify equilibrium";
    result["population"] = population_source_json(args.pop, args.seed);
    result["sizes"] = args.sizes;
    result["cutter"] = args.cutter;
    result["report"] = to_json(report);
    result["pass"] = report.is_equilibrium;
    emit_json(result, args.out_path, out);
    return report.is_equilibrium ? kExitOk : kExitCounterexample;
}

// ----- figures ---------------------------------------------------------

struct OverlayArgs {
    PopulationArgs pop;
    int k = 12;
    int m = 40;
    std::string cutter = "I";
    std::uint64_t seed = 42;
    std::string out_path;
};

int run_overlay(const OverlayArgs& args, std::ostream& out) {
    if (args.out_path.empty()) throw std::invalid_argument("--out is required for figures overlay");
    PopulationArgs pop_args = args.pop;
    if (pop_args.path.empty() && pop_args.normal_n == 0)
        pop_args.normal_n = (2 * args.m + 1) * args.k;
    Population pop = load_population(pop_args, args.seed);
    Outcome outcome = quantile_outcome(pop, args.k, args.m, cutter_from_name(args.cutter));
    write_cdf_overlay_csv(pop, outcome.sample, args.out_path);

    Json manifest_config;
    manifest_config["command"] = "figures overlay";
    manifest_config["population"] = population_source_json(pop_args, args.seed);
    manifest_config["k"] = args.k;
    manifest_config["m"] = args.m;
    manifest_config["cutter"] = args.cutter;
    std::string manifest_path = args.out_path + ".manifest.json";
    write_json_file(make_manifest(manifest_config, {args.out_path}), manifest_path);

    Json summary;
    summary["command"] = "figures overlay";
    summary["csv"] = args.out_path;
    summary["manifest"] = manifest_path;
    summary["positions"] = outcome.sample.positions;
    summary["ks"] = to_json(ks_stat(pop, outcome.sample));
    out << summary.dump(2) << "\n";
    return kExitOk;
}

struct BenchmarkArgs {
    PopulationArgs pop;
    BenchmarkExperimentConfig config;
    std::optional<int> threads;
    std::string out_prefix;
};

int run_figures_benchmark(const BenchmarkArgs& args, std::ostream& out) {
    if (args.out_prefix.empty()) throw std::invalid_argument("--out prefix is required for figures benchmark");
    BenchmarkExperimentConfig config = args.config;
    config.threads = resolve_thread_count(args.threads);
    PopulationArgs pop_args = args.pop;
    if (pop_args.path.empty() && pop_args.normal_n == 0)
        pop_args.normal_n = config.n;
    Population pop = load_population(pop_args, config.seed);
    if (pop.size() != config.n)
        throw std::invalid_argument("population size does not match --n");
    BenchmarkExperimentResult result = run_benchmark_experiment(pop, config);

    std::string ks_path = args.out_prefix + "_ks.csv";
    write_ks_csv(result.records, ks_path);
    std::string summary_path = args.out_prefix + "_summary.csv";
    std::vector<KsSummary> summaries = summarize_ks(result.records);
    write_ks_summary_csv(result.records, summary_path);

    Json manifest_config;
    manifest_config["command"] = "figures benchmark";
    manifest_config["population"] = population_source_json(pop_args, config.seed);
    manifest_config["n"] = config.n;
    manifest_config["k"] = config.k;
    manifest_config["m"] = config.m;
    manifest_config["c"] = config.c;
    manifest_config["replicates"] = config.replicates;
    manifest_config["tolerance"] = config.tolerance;
    manifest_config["seed"] = config.seed;
    Json manifest = make_manifest(manifest_config, {ks_path, summary_path});
    manifest["calibration"] = to_json(result.calibration);
    std::string manifest_path = args.out_prefix + "_manifest.json";
    write_json_file(manifest, manifest_path);

    Json summary;
    summary["command"] = "figures benchmark";
    summary["ks_csv"] = ks_path;
    summary["summary_csv"] = summary_path;
    summary["manifest"] = manifest_path;
    summary["equivalent_n"] = result.calibration.equivalent_n;
    summary["calibration_mean_ks"] = to_json(result.calibration.mean_ks);
    Json means = Json::array();
    for (const KsSummary& s : summaries) {
        Json row;
        row["mechanism"] = s.mechanism;
        row["mean_ks"] = to_json(s.mean);
        means.push_back(std::move(row));
    }
    summary["mean_ks"] = std::move(means);
    out << summary.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adversarial selection mechanisms, exact representativeness statistics, and optimality checks"};
    app.require_subcommand(1);

    SelectArgs select_args;
    CLI::App* select = app.add_subcommand("select", "Play one mechanism and report the selected sample");
    add_population_options(select, &select_args.pop);
    select->add_option("--mechanism", select_args.mechanism,
                       "quantile, cut_and_choose, overlapping_cut_and_choose, random, strike_and_replace, "
                       "median_sample, median_shortlist, random_cut_and_choose");
    select->add_option("--k", select_args.k, "Sample size");
    select->add_option("--m", select_args.m, "Quantile half width");
    select->add_option("--c", select_args.c, "Veto budget per player");
    select->add_option("--sizes", select_args.sizes, "Block or shortlist sizes")->delimiter(',');
    select->add_option("--blocks", select_args.blocks_text, "Explicit blocks, e.g. 1,2|3,4");
    select->add_option("--cutter", select_args.cutter, "I or II")->check(CLI::IsMember({"I", "II"}));
    select->add_option("--strike", select_args.strike, "unconditional or threshold")
        ->check(CLI::IsMember({"unconditional", "threshold"}));
    auto* select_seed = select->add_option("--seed", select_args.seed, "Master seed");
    select->add_option("--out", select_args.out_path, "Write the result JSON here instead of stdout");
    select->add_option("--transcript", select_args.transcript_path, "Write the move transcript as JSONL");

    CompareArgs compare_args;
    CLI::App* compare = app.add_subcommand("compare", "Run replicated mechanisms and write per replicate records");
    add_population_options(compare, &compare_args.pop);
    compare->add_option("--config", compare_args.config_path, "Experiment config JSON");
    compare->add_option("--mechanisms", compare_args.mechanisms, "Mechanism kinds to run")->delimiter(',');
    compare->add_option("--k", compare_args.k, "Sample size");
    compare->add_option("--m", compare_args.m, "Quantile half width");
    compare->add_option("--c", compare_args.c, "Veto budget per player");
    compare->add_option("--reps", compare_args.reps, "Replicates per mechanism");
    compare->add_option("--seed", compare_args.seed, "Master seed");
    compare->add_option("--out", compare_args.out_prefix, "Output file prefix");
    int compare_threads = 0;
    auto* compare_threads_opt = compare->add_option("--threads", compare_threads, "Worker thread count");
    compare->add_option("--format", compare_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* verify = app.add_subcommand("verify", "Check the optimality and equilibrium claims");
    verify->require_subcommand(1);

    Theorem1Args t1_args;
    CLI::App* theorem1 = verify->add_subcommand(
        "theorem1", "Brute force check that quantile samples minimize the distribution distances");
    theorem1->add_option("--n", t1_args.n_values, "Population sizes")->delimiter(',');
    theorem1->add_option("--k", t1_args.k_values, "Sample sizes, parallel to --n")->delimiter(',');
    theorem1->add_option("--weak-trials", t1_args.weak_trials, "Random weak populations to scan");
    theorem1->add_option("--weak-max-n", t1_args.weak_max_n, "Largest weak population size");
    theorem1->add_option("--seed", t1_args.seed, "Master seed");
    theorem1->add_option("--guard", t1_args.guard, "Enumeration guard");
    theorem1->add_option("--out", t1_args.out_path, "Write the result JSON here instead of stdout");

    Theorem2Args t2_args;
    CLI::App* theorem2 = verify->add_subcommand(
        "theorem2", "Check that nested shortlists implement arbitrary target positions");
    theorem2->add_option("--trials", t2_args.trials, "Random target vectors");
    theorem2->add_option("--max-n", t2_args.max_n, "Largest population size");
    theorem2->add_option("--seed", t2_args.seed, "Master seed");
    theorem2->add_option("--out", t2_args.out_path, "Write the result JSON here instead of stdout");

    Theorem3Args t3_args;
    CLI::App* theorem3 = verify->add_subcommand(
        "theorem3", "Check the protection claims against the antagonistic benchmarks");
    theorem3->add_option("--n", t3_args.n, "Population size");
    theorem3->add_option("--sizes", t3_args.sizes, "Block sizes")->delimiter(',');
    theorem3->add_option("--trials", t3_args.trials, "Random preference pairs");
    theorem3->add_option("--seed", t3_args.seed, "Master seed");
    theorem3->add_option("--guard", t3_args.guard, "Enumeration guard");
    theorem3->add_option("--out", t3_args.out_path, "Write the result JSON here instead of stdout");

    Theorem4Args t4_args;
    CLI::App* theorem4 = verify->add_subcommand(
        "theorem4", "Check the partition moment identities and report the ordered partition extremes");
    theorem4->add_option("--seed", t4_args.seed, "Master seed");
    theorem4->add_option("--out", t4_args.out_path, "Write the result JSON here instead of stdout");

    EquilibriumArgs eq_args;
    CLI::App* equilibrium = verify->add_subcommand(
        "equilibrium", "Check a cut and choose profile against all deviations");
    add_population_options(equilibrium, &eq_args.pop);
    equilibrium->add_option("--sizes", eq_args.sizes, "Block sizes")->delimiter(',');
    equilibrium->add_option("--cutter", eq_args.cutter, "I or II")->check(CLI::IsMember({"I", "II"}));
    equilibrium->add_option("--seed", eq_args.seed, "Master seed for --normal populations");
    equilibrium->add_option("--guard", eq_args.guard, "Enumeration guard");
    equilibrium->add_option("--out", eq_args.out_path, "Write the result JSON here instead of stdout");

    CLI::App* figures = app.add_subcommand("figures", "Reproduce the standard experiment outputs");
    figures->require_subcommand(1);

    OverlayArgs overlay_args;
    CLI::App* overlay = figures->add_subcommand(
        "overlay", "Population versus quantile sample distribution functions as CSV");
    add_population_options(overlay, &overlay_args.pop);
    overlay->add_option("--k", overlay_args.k, "Sample size");
    overlay->add_option("--m", overlay_args.m, "Quantile half width");
    overlay->add_option("--cutter", overlay_args.cutter, "I or II")->check(CLI::IsMember({"I", "II"}));
    overlay->add_option("--seed", overlay_args.seed, "Master seed");
    overlay->add_option("--out", overlay_args.out_path, "CSV output path");

    BenchmarkArgs bench_args;
    CLI::App* benchmark = figures->add_subcommand(
        "benchmark", "Replicated mechanism comparison with a calibrated random equivalent");
    add_population_options(benchmark, &bench_args.pop);
    benchmark->add_option("--n", bench_args.config.n, "Population size");
    benchmark->add_option("--k", bench_args.config.k, "Sample size");
    benchmark->add_option("--m", bench_args.config.m, "Quantile half width");
    benchmark->add_option("--c", bench_args.config.c, "Veto budget per player");
    benchmark->add_option("--reps", bench_args.config.replicates, "Replicates per mechanism");
    benchmark->add_option("--tolerance", bench_args.config.tolerance, "Calibration tolerance");
    benchmark->add_option("--seed", bench_args.config.seed, "Master seed");
    int bench_threads = 0;
    auto* bench_threads_opt = benchmark->add_option("--threads", bench_threads, "Worker thread count");
    benchmark->add_option("--out", bench_args.out_prefix, "Output file prefix");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("advsel");
    for (const std::string& a : args) argv_storage.push_back(a);
    std::vector<const char*> argv;
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    select_args.seed_given = select_seed->count() > 0;
    if (compare_threads_opt->count() > 0) compare_args.threads = compare_threads;
    if (bench_threads_opt->count() > 0) bench_args.threads = bench_threads;

    try {
        if (select->parsed()) return run_select(select_args, out);
        if (compare->parsed()) return run_compare(compare_args, out);
        if (verify->parsed()) {
            if (theorem1->parsed()) return run_theorem1(t1_args, out);
            if (theorem2->parsed()) return run_theorem2(t2_args, out);
            if (theorem3->parsed()) return run_theorem3(t3_args, out);
            if (theorem4->parsed()) return run_theorem4(t4_args, out);
            if (equilibrium->parsed()) return run_verify_equilibrium(eq_args, out);
        }
        if (figures->parsed()) {
            if (overlay->parsed()) return run_overlay(overlay_args, out);
            if (benchmark->parsed()) return run_figures_benchmark(bench_args, out);
        }
        err << "usage error: no subcommand selected\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const GuardExceeded& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace advsel
