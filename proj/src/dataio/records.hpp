#pragma once

// JSON-Lines schema for prompt records and score rows.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/dispersion.hpp"
#include "core/evaluation.hpp"

namespace rdskit {

// Insertion-ordered so emitted lines keep the documented field order.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct GenerationSample {
    std::string text;
    std::optional<std::vector<double>> token_logprobs;
    std::optional<std::vector<double>> embedding;

    bool degenerate() const noexcept { return text.empty(); }
    friend bool operator==(const GenerationSample&, const GenerationSample&) = default;
};

enum class CorrectnessKind { ExactMatch, RougeGate };

const char* to_string(CorrectnessKind k) noexcept;

struct PromptRecord {
    std::string id;
    std::string prompt;
    GenerationSample greedy;
    std::vector<GenerationSample> samples;
    std::vector<std::string> references;
    std::string dataset_tag;
    CorrectnessKind correctness_mode = CorrectnessKind::RougeGate;

    friend bool operator==(const PromptRecord&, const PromptRecord&) = default;
};

struct Diagnostic {
    std::size_t line = 0;  // 1-based; 0 when not tied to a line
    std::string id;
    std::string message;
};

struct ReadOptions {
    bool strict = false;
    // Accept lines without greedy/samples (input to the sampler).
    bool prompts_only = false;
};

/// Validates one JSON object against the record schema. Throws
/// MalformedRecord or SchemaVersionMismatch.
PromptRecord record_from_json(const Json& j, bool prompts_only = false);
Json to_json(const PromptRecord& r);
Json to_json(const GenerationSample& s);

/// Streams validated records from a JSONL file. Malformed lines become
/// diagnostics and are skipped, or throw in strict mode. A line carrying a
/// schema version other than 1 always throws.
class RecordReader {
public:
    RecordReader(const std::filesystem::path& path, ReadOptions options);
    ~RecordReader();
    RecordReader(const RecordReader&) = delete;
    RecordReader& operator=(const RecordReader&) = delete;

    std::optional<PromptRecord> next();
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }
    std::size_t lines_read() const noexcept { return line_no_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    ReadOptions options_;
    std::size_t line_no_ = 0;
    std::vector<Diagnostic> diagnostics_;
};

struct ReadResult {
    std::vector<PromptRecord> records;
    std::vector<Diagnostic> diagnostics;
    std::size_t lines = 0;
};

ReadResult read_records(const std::filesystem::path& path, ReadOptions options = {});

void write_records(std::ostream& out, const std::vector<PromptRecord>& records);

/// One line of the score JSONL.
struct ScoreRow {
    std::string id;
    ScoreSet scores;
    std::optional<double> anll;
    std::optional<double> nll;
    std::optional<double> self_consistency;
};

Json to_json(const ScoreRow& row);
ScoreRow score_row_from_json(const Json& j);
std::vector<ScoreRow> read_score_rows(const std::filesystem::path& path);

/// Compact single-line serialization used for every JSONL output.
std::string dump_line(const Json& j);

CorrectnessMode correctness_for(CorrectnessKind kind, double rouge_threshold,
                                const ExtractionMode& extraction);

} // namespace rdskit
