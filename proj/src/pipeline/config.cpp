#include <cstdlib>
#include <fstream>

#include "pipeline/pipeline.hpp"

namespace rdskit {

namespace {

void apply_endpoint(EndpointConfig& ep, const Json& j, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorCode::Config, where + " must be an object");
    try {
        if (j.contains("url")) ep.base_url = j.at("url").get<std::string>();
        if (j.contains("model")) ep.model = j.at("model").get<std::string>();
        if (j.contains("api_key")) ep.api_key = j.at("api_key").get<std::string>();
        if (j.contains("timeout_ms")) ep.timeout = std::chrono::milliseconds(j.at("timeout_ms").get<long long>());
        if (j.contains("max_retries")) ep.max_retries = j.at("max_retries").get<int>();
        if (j.contains("max_in_flight")) ep.max_in_flight = j.at("max_in_flight").get<int>();
        if (j.contains("batch_size")) ep.batch_size = j.at("batch_size").get<std::size_t>();
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Config, where + ": " + e.what());
    }
}

} // namespace

void apply_config_file(RunOptions& opts, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Config, "cannot open config file " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::Config, "config file " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::Config, "config file must hold a JSON object");
    try {
        if (j.contains("embed")) apply_endpoint(opts.embed, j.at("embed"), "embed");
        if (j.contains("llm")) apply_endpoint(opts.llm, j.at("llm"), "llm");
        if (j.contains("cache_dir")) opts.cache_dir = j.at("cache_dir").get<std::string>();
        if (j.contains("workers")) opts.workers = j.at("workers").get<int>();
        if (j.contains("n_samples")) opts.sampling.n = j.at("n_samples").get<int>();
        if (j.contains("temperature")) opts.sampling.temperature = j.at("temperature").get<double>();
        if (j.contains("max_tokens")) opts.sampling.max_tokens = j.at("max_tokens").get<int>();
        if (j.contains("rouge_threshold")) opts.rouge_threshold = j.at("rouge_threshold").get<double>();
        if (j.contains("extract")) opts.extract = j.at("extract").get<std::string>();
        if (j.contains("seed")) opts.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("methods")) opts.methods = j.at("methods").get<std::vector<std::string>>();
        if (j.contains("correctness")) {
            const auto c = j.at("correctness").get<std::string>();
            if (c == "exact" || c == "exact_match") {
                opts.correctness = CorrectnessKind::ExactMatch;
            } else if (c == "rouge" || c == "rouge_gate") {
                opts.correctness = CorrectnessKind::RougeGate;
            } else {
                throw Error(ErrorCode::Config, "correctness must be \"exact\" or \"rouge\"");
            }
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Config, "config file " + path.string() + ": " + e.what());
    }
}

void apply_environment(RunOptions& opts) {
    auto env = [](const char* name) -> const char* {
        const char* v = std::getenv(name);
        return v && *v ? v : nullptr;
    };
    if (const char* key = env("RDSKIT_API_KEY")) {
        opts.embed.api_key = key;
        opts.llm.api_key = key;
    }
    if (const char* url = env("RDSKIT_EMBED_URL")) opts.embed.base_url = url;
    if (const char* url = env("RDSKIT_LLM_URL")) opts.llm.base_url = url;
    if (const char* m = env("RDSKIT_EMBED_MODEL")) opts.embed.model = m;
    if (const char* m = env("RDSKIT_LLM_MODEL")) opts.llm.model = m;
    if (const char* dir = env("RDSKIT_CACHE_DIR")) opts.cache_dir = dir;
}

} // namespace rdskit
