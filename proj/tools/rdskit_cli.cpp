// rdskit command-line tool. Talks to the library only through rdskit.h.
#include <rdskit/rdskit.h>

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace {

struct Flags {
    std::string config;
    std::map<std::string, std::string> strings;
    std::map<std::string, std::int64_t> ints;
    std::map<std::string, double> reals;
    std::string correctness;
    bool strict = false;
    bool force = false;
    bool no_cache = false;
    bool no_logprobs = false;
    bool quiet = false;
    bool verbose = false;
};

struct OptionsDeleter {
    void operator()(rdskit_run_options* o) const { rdskit_run_options_destroy(o); }
};
using OptionsPtr = std::unique_ptr<rdskit_run_options, OptionsDeleter>;

int report_failure(const char* what, rdskit_status st) {
    std::fprintf(stderr, "rdskit: error: %s failed (%s): %s\n", what, rdskit_status_name(st), rdskit_last_error());
    return st == RDSKIT_E_CONFIG || st == RDSKIT_E_INVALID_ARGUMENT ? 2 : 1;
}

// Registers a string-valued flag whose value is forwarded under `key` only
// when given on the command line, so env vars and config files still apply.
void add_string(CLI::App& app, Flags& f, const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(name, [&f, key](const std::string& v) { f.strings[key] = v; }, help);
}

void add_int(CLI::App& app, Flags& f, const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<std::int64_t>(name, [&f, key](const std::int64_t& v) { f.ints[key] = v; }, help);
}

void add_real(CLI::App& app, Flags& f, const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<double>(name, [&f, key](const double& v) { f.reals[key] = v; }, help);
}

void add_common(CLI::App& sub, Flags& f) {
    add_string(sub, f, "--input,-i", "input", "Input JSONL file");
    add_string(sub, f, "--output,-o", "output", "Output file ('-' for stdout)");
    sub.add_flag("--strict", f.strict, "Abort on the first malformed record");
    sub.add_flag("--force", f.force, "Overwrite an existing output file");
    add_int(sub, f, "--seed", "seed", "Random seed");
    add_int(sub, f, "--workers", "workers", "Number of record-parallel workers");
    sub.add_option("--config", f.config, "JSON config file");
}

void add_embedding(CLI::App& sub, Flags& f) {
    add_string(sub, f, "--sidecar", "sidecar", "Binary embedding sidecar matching the input samples");
    add_string(sub, f, "--embed-url", "embed_url", "OpenAI-compatible embedding endpoint base URL");
    add_string(sub, f, "--embed-model", "embed_model", "Embedding model name");
    add_string(sub, f, "--api-key", "api_key", "API key for the endpoints");
    add_string(sub, f, "--cache-dir", "cache_dir", "Embedding cache directory");
    sub.add_flag("--no-cache", f.no_cache, "Bypass the embedding cache");
    add_int(sub, f, "--batch-size", "batch_size", "Texts per embedding request");
    add_int(sub, f, "--max-in-flight", "max_in_flight", "Concurrent request limit");
    add_int(sub, f, "--max-retries", "max_retries", "Retries per request");
    add_int(sub, f, "--timeout-ms", "timeout_ms", "Request timeout in milliseconds");
}

void add_labels(CLI::App& sub, Flags& f) {
    add_string(sub, f, "--methods,-m", "methods", "Comma-separated methods");
    sub.add_option("--correctness", f.correctness, "Correctness mode (default: per record)")
        ->check(CLI::IsMember({"exact", "rouge"}));
    add_real(sub, f, "--rouge-threshold", "rouge_threshold", "ROUGE-L F1 gate (strictly greater; default 0.3)");
    add_string(sub, f, "--extract", "extract", "Answer extraction: last_number, normalized_full or regex:<pattern>");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial dispersion uncertainty scoring for sampled LLM generations", "rdskit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rdskit_version()));
    Flags f;
    app.add_flag("--quiet,-q", f.quiet, "Only log errors");
    app.add_flag("--verbose,-v", f.verbose, "Log debug messages");

    auto* score = app.add_subcommand("score", "Score records with RDS, EigenEmbed and baselines");
    add_common(*score, f);
    add_embedding(*score, f);
    add_labels(*score, f);

    auto* evaluate = app.add_subcommand("evaluate", "AUROC of uncertainty scores against greedy correctness");
    add_common(*evaluate, f);
    add_embedding(*evaluate, f);
    add_labels(*evaluate, f);
    add_string(*evaluate, f, "--scores", "scores", "Precomputed score JSONL to join by id");

    auto* bestofn = app.add_subcommand("bestofn", "Best-of-N selection accuracy from per-sample scores");
    add_common(*bestofn, f);
    add_embedding(*bestofn, f);
    add_labels(*bestofn, f);

    auto* embed = app.add_subcommand("embed", "Attach embeddings to every sample");
    add_common(*embed, f);
    add_embedding(*embed, f);
    add_string(*embed, f, "--sidecar-out", "sidecar_out", "Also write embeddings to a binary sidecar");

    auto* sample = app.add_subcommand("sample", "Draw N generations per prompt from a chat endpoint");
    add_common(*sample, f);
    add_int(*sample, f, "--n-samples", "n_samples", "Generations per prompt (default 10)");
    add_real(*sample, f, "--temperature", "temperature", "Sampling temperature (default 1.0)");
    add_int(*sample, f, "--max-tokens", "max_tokens", "Token limit per generation");
    add_string(*sample, f, "--llm-url", "llm_url", "OpenAI-compatible chat endpoint base URL");
    add_string(*sample, f, "--llm-model", "llm_model", "Chat model name");
    add_string(*sample, f, "--api-key", "api_key", "API key for the endpoints");
    sample->add_flag("--no-logprobs", f.no_logprobs, "Do not request token log-probabilities");
    add_int(*sample, f, "--max-in-flight", "max_in_flight", "Concurrent request limit");
    add_int(*sample, f, "--max-retries", "max_retries", "Retries per request");
    add_int(*sample, f, "--timeout-ms", "timeout_ms", "Request timeout in milliseconds");

    auto* simulate = app.add_subcommand("simulate", "Synthetic regime sweep written as CSV");
    add_string(*simulate, f, "--output,-o", "output", "Output CSV ('-' for stdout)");
    simulate->add_flag("--force", f.force, "Overwrite an existing output file");
    add_int(*simulate, f, "--seed", "seed", "Base seed");
    simulate->add_option("--config", f.config, "JSON config file");
    add_string(*simulate, f, "--regimes", "regimes", "Comma-separated regimes (coherent,hemispheric,opposing)");
    add_string(*simulate, f, "--noise", "noise", "Comma-separated noise levels");
    add_int(*simulate, f, "--n-samples", "n_samples", "Samples per set (default 10)");
    add_int(*simulate, f, "--dim", "dim", "Embedding dimension (default 2)");
    add_int(*simulate, f, "--clusters", "clusters", "Opposing clusters (default 2)");
    add_int(*simulate, f, "--seeds", "seeds", "Seeds per (regime, noise) cell");

    CLI11_PARSE(app, argc, argv);

    if (f.quiet) rdskit_set_log_level(RDSKIT_LOG_ERROR);
    if (f.verbose) rdskit_set_log_level(RDSKIT_LOG_DEBUG);

    rdskit_run_options* raw = nullptr;
    if (auto st = rdskit_run_options_create(f.config.empty() ? nullptr : f.config.c_str(), &raw); st != RDSKIT_OK)
        return report_failure("loading configuration", st);
    OptionsPtr opts(raw);

    for (const auto& [key, value] : f.strings)
        if (auto st = rdskit_run_options_set_string(opts.get(), key.c_str(), value.c_str()); st != RDSKIT_OK)
            return report_failure(("--" + key).c_str(), st);
    for (const auto& [key, value] : f.ints)
        if (auto st = rdskit_run_options_set_int(opts.get(), key.c_str(), value); st != RDSKIT_OK)
            return report_failure(("--" + key).c_str(), st);
    for (const auto& [key, value] : f.reals)
        if (auto st = rdskit_run_options_set_double(opts.get(), key.c_str(), value); st != RDSKIT_OK)
            return report_failure(("--" + key).c_str(), st);
    if (f.strict) rdskit_run_options_set_int(opts.get(), "strict", 1);
    if (f.force) rdskit_run_options_set_int(opts.get(), "force", 1);
    if (f.no_cache) rdskit_run_options_set_int(opts.get(), "use_cache", 0);
    if (f.no_logprobs) rdskit_run_options_set_int(opts.get(), "want_logprobs", 0);
    if (!f.correctness.empty())
        rdskit_run_options_set_correctness(opts.get(), f.correctness == "exact" ? RDSKIT_CORRECTNESS_EXACT
                                                                                : RDSKIT_CORRECTNESS_ROUGE);

    using Cmd = rdskit_status (*)(const rdskit_run_options*, rdskit_run_summary*);
    const std::pair<CLI::App*, Cmd> table[] = {
        {score, rdskit_cmd_score},   {evaluate, rdskit_cmd_evaluate}, {bestofn, rdskit_cmd_bestofn},
        {embed, rdskit_cmd_embed},   {sample, rdskit_cmd_sample},     {simulate, rdskit_cmd_simulate},
    };
    for (const auto& [sub, cmd] : table) {
        if (!sub->parsed()) continue;
        rdskit_run_summary summary{};
        const rdskit_status st = cmd(opts.get(), &summary);
        if (st != RDSKIT_OK) return report_failure(sub->get_name().c_str(), st);
        std::fprintf(stderr, "rdskit %s: records read %zu, scored %zu, skipped %zu, network calls %llu\n",
                     sub->get_name().c_str(), summary.records_read, summary.scored, summary.skipped,
                     static_cast<unsigned long long>(summary.network_calls));
        if (summary.rds_w_missing)
            std::fprintf(stderr, "rdskit %s: %zu records without log-probabilities have rds_w = null\n",
                         sub->get_name().c_str(), summary.rds_w_missing);
        return 0;
    }
    return 0;
}
