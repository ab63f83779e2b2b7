#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "relex/jsonio.hpp"
#include "relex/normalize.hpp"

namespace relex {

enum class PipelineKind { direct, summarize_then_classify };

const char* to_string(PipelineKind kind);
std::optional<PipelineKind> pipeline_from_string(std::string_view name);

// Identity of a run. Offline reruns with an equal manifest must produce
// byte-identical results files, so wall-clock timestamps are only embedded
// for remote (non-deterministic) backends.
struct RunManifest {
    std::string run_id; // content hash of the deterministic fields
    PipelineKind pipeline = PipelineKind::direct;
    std::string backend_fingerprint;
    std::string embedding_fingerprint;
    std::string corpus_checksum;
    std::uint64_t seed = 0;
    std::string split;
    bool deterministic = true;
    std::string started_at;  // empty when deterministic
    std::string finished_at;

    void assign_run_id();
    json to_json() const;
    static RunManifest from_json(const json& doc);
};

// One evaluated instance; records both the raw model output and the
// normalized outcome.
struct ResultRecord {
    std::size_t index = 0;
    std::string passage_id;
    std::string entity1_id;
    std::string entity2_id;
    std::string entity1;
    std::string entity2;
    std::string gold; // canonical label
    std::optional<std::string> summary_text; // summarization pipeline only
    std::string raw_output;
    std::string stripped;
    NormalizedPrediction prediction;
    std::string finish_reason;
    std::int64_t latency_ms = 0;

    json to_json() const;
    static ResultRecord from_json(const json& doc);

    bool is_error() const { return !prediction.resolved() || *prediction.label != gold; }
};

struct ResultsFile {
    RunManifest manifest;
    std::vector<ResultRecord> records;
};

// Line-delimited JSON: manifest header line, then one record per line.
ResultsFile read_results(const std::filesystem::path& path);
void append_record(std::ostream& out, const ResultRecord& record);
void write_manifest_header(std::ostream& out, const RunManifest& manifest);

} // namespace relex
