#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "pm/atp_learn.hpp"
#include "pm/cluster.hpp"
#include "pm/corpus.hpp"

namespace pm {

// Every persisted document is a JSON object
//   { "format_version", "kind", "provenance", "payload", "checksum" }
// where checksum is the FNV-1a digest of {"payload","provenance"} serialized compactly.
inline constexpr int kFormatVersion = 1;

struct Provenance {
    std::uint64_t corpus_hash = 0;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
};

// Logs a warning when the stored corpus hash differs from `corpus`; returns whether they match.
bool check_corpus_hash(const Provenance& provenance, const Corpus& corpus);

std::string serialize_corpus(const Corpus& corpus);
Corpus deserialize_corpus(const std::string& text);

std::string serialize_premise_model(const PremiseModel& model, const Provenance& provenance);
struct LoadedPremiseModel {
    PremiseModel model;
    Provenance provenance;
};
LoadedPremiseModel deserialize_premise_model(const std::string& text);

// A fitted clustering together with the points it was fitted on, so families can be rebuilt
// at a different proximity threshold.
struct ClusterFile {
    Dataset data;
    ClusterModel model;
    double proximity_threshold = 0.0;
    std::vector<ProofFamily> families;
};

std::string serialize_cluster_file(const ClusterFile& file, const Provenance& provenance);
struct LoadedClusterFile {
    ClusterFile file;
    Provenance provenance;
};
LoadedClusterFile deserialize_cluster_file(const std::string& text);

// Whole-file helpers; throw IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

void save_model(const PremiseModel& model, const Provenance& provenance, const std::filesystem::path& path);
LoadedPremiseModel load_model(const std::filesystem::path& path);

}  // namespace pm
