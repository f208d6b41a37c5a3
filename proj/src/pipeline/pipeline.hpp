#pragma once

// File-to-file pipelines behind the CLI subcommands.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clients/clients.hpp"
#include "core/regime_sim.hpp"
#include "dataio/records.hpp"

namespace rdskit {

struct RunOptions {
    std::filesystem::path input;
    std::filesystem::path output;       // empty or "-" = stdout
    std::filesystem::path scores;       // evaluate: precomputed score JSONL
    std::filesystem::path sidecar;      // embeddings sidecar to attach
    std::filesystem::path sidecar_out;  // embed: also write a sidecar
    std::vector<std::string> methods;   // empty = subcommand default
    std::optional<CorrectnessKind> correctness;  // overrides the records' mode
    double rouge_threshold = kDefaultRougeThreshold;
    std::string extract;                // empty = from correctness mode
    SamplingConfig sampling;
    bool strict = false;
    bool force = false;
    std::uint64_t seed = 0;
    int workers = 1;

    // An endpoint counts as configured when its base_url is non-empty. The
    // embedding model name doubles as the cache's encoder id.
    EndpointConfig embed{.base_url = {}, .api_key = {}, .model = "sentence-transformers/all-MiniLM-L6-v2"};
    EndpointConfig llm;
    std::filesystem::path cache_dir;      // empty = EmbeddingCache::default_root()
    bool use_cache = true;

    // simulate
    std::vector<Regime> regimes{Regime::Coherent, Regime::Hemispheric, Regime::Opposing};
    std::size_t sim_n = 10;
    std::size_t sim_dim = 2;
    std::vector<double> sim_noise{0.0};
    std::size_t sim_clusters = 2;
    std::size_t sim_seeds = 1;

    // Test hooks; default to HTTP transports built from the endpoint configs.
    std::shared_ptr<Transport> embed_transport;
    std::shared_ptr<Transport> llm_transport;
};

struct RunSummary {
    std::size_t records_read = 0;
    std::size_t scored = 0;
    std::size_t skipped = 0;
    std::size_t rds_w_missing = 0;
    std::uint64_t network_calls = 0;
    std::vector<Diagnostic> diagnostics;
};

/// Fixed report keys.
inline const std::vector<std::string> kPromptMethods{"rds", "rds_l2", "rds_w", "eigen_embed", "anll", "nll", "sc"};
inline const std::vector<std::string> kSampleMethods{"rds_s", "rds_w_s", "anll", "nll", "sc"};

struct SliceStats {
    std::size_t n_prompts = 0;
    std::size_t n_correct = 0;
    std::map<std::string, std::optional<double>> auroc;
    std::map<std::string, std::optional<double>> best_of_n_accuracy;
    std::map<std::string, std::size_t> n;  // items per method
};

struct EvalReport {
    std::vector<std::string> methods;
    SliceStats all;
    std::map<std::string, SliceStats> slices;  // by dataset_tag
    Json rows = Json::array();
};

Json to_json(const EvalReport& report);
/// method,metric,value,n; metric is "<metric>:<slice>", slice "all" or a tag.
std::string to_csv(const EvalReport& report);

/// Scores one record. Throws on records that cannot be scored (N < 2,
/// degenerate or missing embeddings).
ScoreRow score_record(const PromptRecord& record, const ExtractionMode& extraction,
                      std::size_t* renormalized = nullptr);

ExtractionMode extraction_for(const RunOptions& opts, CorrectnessKind kind);

RunSummary cmd_score(const RunOptions& opts);
RunSummary cmd_evaluate(const RunOptions& opts, EvalReport* report_out = nullptr);
RunSummary cmd_bestofn(const RunOptions& opts, EvalReport* report_out = nullptr);
RunSummary cmd_embed(const RunOptions& opts);
RunSummary cmd_sample(const RunOptions& opts);
RunSummary cmd_simulate(const RunOptions& opts);

/// Layered configuration: defaults, then a JSON config file, then RDSKIT_*
/// environment variables. Flags are applied by the caller afterwards.
void apply_config_file(RunOptions& opts, const std::filesystem::path& path);
void apply_environment(RunOptions& opts);

} // namespace rdskit
