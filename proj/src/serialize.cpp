#include "advsel/serialize.hpp"

#include "advsel/errors.hpp"
#include "advsel/random.hpp"

#include <cstdio>
#include <fstream>

namespace advsel {

Json to_json(const Rational& value) {
    return Json{{"decimal", value.to_decimal_string()},
                {"num", value.num().str()},
                {"den", value.den().str()}};
}

Json to_json(const Sample& sample) {
    return Json(sample.positions);
}

Json to_json(const TranscriptEntry& entry) {
    return Json{{"actor", entry.actor}, {"message", entry.message}};
}

Json to_json(const Outcome& outcome) {
    Json j;
    j["positions"] = outcome.sample.positions;
    Json transcript = Json::array();
    for (const auto& entry : outcome.transcript) {
        transcript.push_back(to_json(entry));
    }
    j["transcript"] = transcript;
    if (!outcome.distribution.empty()) {
        Json dist = Json::array();
        for (const auto& [sample, probability] : outcome.distribution) {
            dist.push_back(Json{{"positions", sample.positions},
                                {"probability", to_json(probability)}});
        }
        j["distribution"] = dist;
    }
    return j;
}

const char* cutter_name(Cutter cutter) { return cutter == Cutter::PlayerI ? "I" : "II"; }

Cutter cutter_from_name(const std::string& name) {
    if (name == "I") {
        return Cutter::PlayerI;
    }
    if (name == "II") {
        return Cutter::PlayerII;
    }
    throw std::invalid_argument("cutter must be 'I' or 'II', got '" + name + "'");
}

namespace {

const char* strike_name(StrikeStrategy strategy) {
    return strategy == StrikeStrategy::Unconditional ? "unconditional" : "threshold";
}

StrikeStrategy strike_from_name(const std::string& name) {
    if (name == "unconditional") {
        return StrikeStrategy::Unconditional;
    }
    if (name == "threshold") {
        return StrikeStrategy::Threshold;
    }
    throw std::invalid_argument("strike strategy must be 'unconditional' or 'threshold'");
}

Json blocks_to_json(const std::vector<std::vector<int>>& blocks) {
    Json j = Json::array();
    for (const auto& block : blocks) {
        j.push_back(block);
    }
    return j;
}

}  // namespace

Json to_json(const MechanismConfig& config) {
    Json j;
    j["kind"] = mechanism_kind_name(config.kind);
    switch (config.kind) {
        case MechanismKind::Quantile:
            j["k"] = config.k;
            j["m"] = config.m;
            j["cutter"] = cutter_name(config.cutter);
            break;
        case MechanismKind::CutAndChoose:
            j["sizes"] = config.block_sizes;
            j["cutter"] = cutter_name(config.cutter);
            break;
        case MechanismKind::OverlappingCutAndChoose:
            j["sizes"] = config.block_sizes;
            j["cutter"] = cutter_name(config.cutter);
            break;
        case MechanismKind::Random:
            j["k"] = config.k;
            break;
        case MechanismKind::StrikeAndReplace:
            j["k"] = config.k;
            j["c"] = config.c;
            j["strike"] = strike_name(config.strike);
            break;
        case MechanismKind::MedianSample:
            j["k"] = config.k;
            j["c"] = config.c;
            break;
        case MechanismKind::MedianShortlist:
            break;
        case MechanismKind::RandomCutAndChoose:
            j["k"] = config.k;
            if (!config.blocks.empty()) {
                j["blocks"] = blocks_to_json(config.blocks);
            }
            break;
    }
    if (config.seed) {
        j["seed"] = *config.seed;
    }
    return j;
}

MechanismConfig mechanism_config_from_json(const Json& j) {
    MechanismConfig config;
    config.kind = mechanism_kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("k")) {
        config.k = j.at("k").get<int>();
    }
    if (j.contains("m")) {
        config.m = j.at("m").get<int>();
    }
    if (j.contains("c")) {
        config.c = j.at("c").get<int>();
    }
    if (j.contains("sizes")) {
        config.block_sizes = j.at("sizes").get<std::vector<int>>();
    }
    if (j.contains("blocks")) {
        config.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
    }
    if (j.contains("cutter")) {
        config.cutter = cutter_from_name(j.at("cutter").get<std::string>());
    }
    if (j.contains("strike")) {
        config.strike = strike_from_name(j.at("strike").get<std::string>());
    }
    if (j.contains("seed")) {
        config.seed = j.at("seed").get<std::uint64_t>();
    }
    return config;
}

Json to_json(const MechanismRun& run) {
    Json j = to_json(run.config);
    j["id"] = run.id;
    return j;
}

Json to_json(const ExperimentConfig& config) {
    Json j;
    j["seed"] = config.seed;
    j["replicates"] = config.replicates;
    Json mechanisms = Json::array();
    for (const auto& run : config.mechanisms) {
        mechanisms.push_back(to_json(run));
    }
    j["mechanisms"] = mechanisms;
    return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
    ExperimentConfig config;
    config.seed = j.at("seed").get<std::uint64_t>();
    config.replicates = j.at("replicates").get<int>();
    for (const auto& entry : j.at("mechanisms")) {
        MechanismRun run;
        run.config = mechanism_config_from_json(entry);
        run.id = entry.contains("id") ? entry.at("id").get<std::string>()
                                      : std::string(mechanism_kind_name(run.config.kind));
        config.mechanisms.push_back(std::move(run));
    }
    return config;
}

Json to_json(const OptimalityReport& report) {
    Json j;
    j["stat"] = stat_kind_name(report.stat);
    j["k"] = report.k;
    j["minimum"] = to_json(report.minimum);
    j["samples_checked"] = report.samples_checked;
    j["minimizer_count"] = report.minimizer_count;
    Json minimizers = Json::array();
    for (const auto& sample : report.minimizers) {
        minimizers.push_back(sample.positions);
    }
    j["minimizers"] = minimizers;
    j["quantile_applicable"] = report.quantile_applicable;
    if (report.quantile_applicable) {
        j["quantile_sample"] = report.quantile_sample.positions;
        j["quantile_attains_minimum"] = report.quantile_attains_minimum;
        j["minimizers_match_quantile_class"] = report.minimizers_match_quantile_class;
    }
    return j;
}

Json to_json(const PartitionMoments& moments) {
    Json j;
    j["mean"] = to_json(moments.mean);
    j["expected_sample_variance"] = to_json(moments.expected_sample_variance);
    j["variance_of_sample_mean"] = to_json(moments.variance_of_sample_mean);
    j["enumerated"] = moments.enumerated;
    if (moments.enumerated) {
        j["samples_enumerated"] = moments.samples_enumerated;
        j["enumerated_mean"] = to_json(moments.enumerated_mean);
        j["enumerated_expected_sample_variance"] =
            to_json(moments.enumerated_expected_sample_variance);
    }
    return j;
}

Json to_json(const PartitionSearchResult& result) {
    Json j;
    j["objective"] = result.objective == PartitionObjective::ExpectedSampleVariance
                         ? "expected_sample_variance"
                         : "sample_mean_variance";
    j["partitions_checked"] = result.partitions_checked;
    j["minimum"] = to_json(result.minimum);
    j["maximum"] = to_json(result.maximum);
    j["argmin"] = blocks_to_json(result.argmin);
    j["argmax"] = blocks_to_json(result.argmax);
    j["ordered_partition"] = blocks_to_json(result.ordered_partition);
    j["ordered_value"] = to_json(result.ordered_value);
    j["ordered_is_minimum"] = result.ordered_is_minimum;
    j["ordered_is_maximum"] = result.ordered_is_maximum;
    return j;
}

Json to_json(const EquilibriumReport& report) {
    Json j;
    j["is_equilibrium"] = report.is_equilibrium;
    j["outcome"] = report.outcome.positions;
    j["cutter_utility"] = report.cutter_utility;
    j["chooser_utility"] = report.chooser_utility;
    j["deviation_count"] = report.deviation_count;
    Json deviations = Json::array();
    for (const auto& deviation : report.deviations) {
        deviations.push_back(Json{{"deviator", deviation.deviator},
                                  {"deviation", deviation.description},
                                  {"gain", deviation.gain}});
    }
    j["deviations"] = deviations;
    j["partitions_checked"] = report.partitions_checked;
    return j;
}

Json to_json(const BenchmarkComparison& comparison) {
    Json j;
    j["outcome"] = comparison.outcome.positions;
    j["benchmark_i"] = comparison.benchmark_i.positions;
    j["benchmark_ii"] = comparison.benchmark_ii.positions;
    j["utility_i"] = comparison.utility_i;
    j["utility_i_benchmark"] = comparison.utility_i_benchmark;
    j["utility_ii"] = comparison.utility_ii;
    j["utility_ii_benchmark"] = comparison.utility_ii_benchmark;
    j["utility_claim_i"] = comparison.utility_claim_i;
    j["cdf_claim_ii"] = comparison.cdf_claim_ii;
    return j;
}

Json to_json(const CalibrationResult& result) {
    Json j;
    j["equivalent_n"] = result.equivalent_n;
    j["mean_ks"] = to_json(result.mean_ks);
    j["target"] = to_json(result.target);
    j["evaluations"] = result.evaluations;
    j["replicates"] = result.replicates;
    return j;
}

std::string config_hash(const Json& j) {
    std::uint64_t h = detail::fnv1a64(j.dump());
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

Json make_manifest(const Json& config, const std::vector<std::string>& outputs) {
    Json j;
    j["tool"] = "advsel";
    j["config"] = config;
    j["config_hash"] = config_hash(config);
    j["outputs"] = outputs;
    return j;
}

void write_json_file(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write file: " + path);
    }
    out << j.dump(2) << '\n';
    if (!out.flush()) {
        throw IoError("failed writing file: " + path);
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError(path + ": " + e.what());
    }
    return j;
}

void write_transcript_jsonl(const std::vector<TranscriptEntry>& transcript,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write file: " + path);
    }
    for (const auto& entry : transcript) {
        out << to_json(entry).dump() << '\n';
    }
    if (!out.flush()) {
        throw IoError("failed writing file: " + path);
    }
}

}  // namespace advsel
