#pragma once

#include "advsel/core.hpp"
#include "advsel/gametheory.hpp"
#include "advsel/mechanisms.hpp"
#include "advsel/oracle.hpp"
#include "advsel/rational.hpp"
#include "advsel/simulation.hpp"

#include <json.hpp>

#include <string>

namespace advsel {

using Json = nlohmann::ordered_json;

// JSON views of the library's value types.  Statistics appear as an object
// with a 12-significant-digit decimal plus the exact numerator/denominator,
// so downstream tooling can choose its precision.
Json to_json(const Rational& value);
Json to_json(const Sample& sample);
Json to_json(const TranscriptEntry& entry);
Json to_json(const Outcome& outcome);
Json to_json(const MechanismConfig& config);
MechanismConfig mechanism_config_from_json(const Json& j);
Json to_json(const MechanismRun& run);
Json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const Json& j);
Json to_json(const OptimalityReport& report);
Json to_json(const PartitionMoments& moments);
Json to_json(const PartitionSearchResult& result);
Json to_json(const EquilibriumReport& report);
Json to_json(const BenchmarkComparison& comparison);
Json to_json(const CalibrationResult& result);

const char* cutter_name(Cutter cutter);
Cutter cutter_from_name(const std::string& name);

// FNV-1a hash of the compact serialization, as fixed-width hex.  Stable
// across runs, used to stamp manifests.
std::string config_hash(const Json& j);

// A run manifest: the full configuration, its hash, and the files the run
// produced.  Enough to replay the run exactly.
Json make_manifest(const Json& config, const std::vector<std::string>& outputs);

void write_json_file(const Json& j, const std::string& path);
Json read_json_file(const std::string& path);

// Transcript as JSON Lines: one {"actor": ..., "message": ...} per line.
void write_transcript_jsonl(const std::vector<TranscriptEntry>& transcript,
                            const std::string& path);

}  // namespace advsel
