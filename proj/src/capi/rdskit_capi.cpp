#include "rdskit/rdskit.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <string_view>

#include "clients/clients.hpp"
#include "core/baselines.hpp"
#include "core/dispersion.hpp"
#include "core/error.hpp"
#include "core/evaluation.hpp"
#include "core/log.hpp"
#include "core/regime_sim.hpp"
#include "dataio/cache.hpp"
#include "pipeline/pipeline.hpp"

struct rdskit_embedding_set {
    rdskit::EmbeddingSet set;
};

struct rdskit_cache {
    std::shared_ptr<rdskit::EmbeddingCache> cache;
};

struct rdskit_embedder {
    std::unique_ptr<rdskit::EmbeddingClient> client;
};

struct rdskit_run_options {
    rdskit::RunOptions opts;
};

namespace {

thread_local std::string t_last_error;

rdskit_status to_status(rdskit::ErrorCode code) {
    using rdskit::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument: return RDSKIT_E_INVALID_ARGUMENT;
    case ErrorCode::DegenerateEmbedding: return RDSKIT_E_DEGENERATE_EMBEDDING;
    case ErrorCode::LengthMismatch: return RDSKIT_E_LENGTH_MISMATCH;
    case ErrorCode::InvalidLikelihood: return RDSKIT_E_INVALID_LIKELIHOOD;
    case ErrorCode::EmptyGeneration: return RDSKIT_E_EMPTY_GENERATION;
    case ErrorCode::InvalidVector: return RDSKIT_E_INVALID_VECTOR;
    case ErrorCode::DuplicateId: return RDSKIT_E_DUPLICATE_ID;
    case ErrorCode::MalformedRecord: return RDSKIT_E_MALFORMED_RECORD;
    case ErrorCode::SchemaVersionMismatch: return RDSKIT_E_SCHEMA_VERSION;
    case ErrorCode::Io: return RDSKIT_E_IO;
    case ErrorCode::Config: return RDSKIT_E_CONFIG;
    case ErrorCode::EncoderInconsistency: return RDSKIT_E_ENCODER_INCONSISTENCY;
    case ErrorCode::PartialBatch: return RDSKIT_E_PARTIAL_BATCH;
    case ErrorCode::Auth: return RDSKIT_E_AUTH;
    case ErrorCode::Network: return RDSKIT_E_NETWORK;
    case ErrorCode::OutputExists: return RDSKIT_E_OUTPUT_EXISTS;
    }
    return RDSKIT_E_INTERNAL;
}

rdskit_status fail(rdskit_status status, std::string message) {
    t_last_error = std::move(message);
    return status;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
rdskit_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        return RDSKIT_OK;
    } catch (const rdskit::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(RDSKIT_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RDSKIT_E_INTERNAL, e.what());
    } catch (...) {
        return fail(RDSKIT_E_INTERNAL, "unknown error");
    }
}

#define RDSKIT_REQUIRE(cond, what)                                      \
    do {                                                                \
        if (!(cond)) return fail(RDSKIT_E_INVALID_ARGUMENT, (what));    \
    } while (0)

rdskit::ProbabilityWeights weights_of(const double* w, std::size_t n, std::size_t expected) {
    if (!w && n) throw rdskit::Error(rdskit::ErrorCode::InvalidArgument, "null weights");
    if (n != expected) {
        throw rdskit::Error(rdskit::ErrorCode::LengthMismatch,
                            "got " + std::to_string(n) + " weights for " + std::to_string(expected) + " samples");
    }
    return rdskit::ProbabilityWeights(std::vector<double>(w, w + n));
}

void copy_out(const std::vector<double>& v, double* out) { std::copy(v.begin(), v.end(), out); }

std::vector<std::string> split_csv(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(',', start);
        if (end == std::string_view::npos) end = s.size();
        auto item = s.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.emplace_back(item);
        start = end + 1;
    }
    return out;
}

void fill_summary(const rdskit::RunSummary& s, rdskit_run_summary* out) {
    if (!out) return;
    out->records_read = s.records_read;
    out->scored = s.scored;
    out->skipped = s.skipped;
    out->rds_w_missing = s.rds_w_missing;
    out->network_calls = s.network_calls;
}

template <class Cmd>
rdskit_status run(const rdskit_run_options* opts, rdskit_run_summary* summary, Cmd cmd) {
    RDSKIT_REQUIRE(opts, "null options");
    return guarded([&] { fill_summary(cmd(opts->opts), summary); });
}

} // namespace

extern "C" {

const char* rdskit_version(void) { return "0.1.0"; }

const char* rdskit_status_name(rdskit_status status) {
    switch (status) {
    case RDSKIT_OK: return "ok";
    case RDSKIT_E_INVALID_ARGUMENT: return "InvalidArgument";
    case RDSKIT_E_DEGENERATE_EMBEDDING: return "DegenerateEmbedding";
    case RDSKIT_E_LENGTH_MISMATCH: return "LengthMismatch";
    case RDSKIT_E_INVALID_LIKELIHOOD: return "InvalidLikelihood";
    case RDSKIT_E_EMPTY_GENERATION: return "EmptyGeneration";
    case RDSKIT_E_INVALID_VECTOR: return "InvalidVector";
    case RDSKIT_E_DUPLICATE_ID: return "DuplicateId";
    case RDSKIT_E_MALFORMED_RECORD: return "MalformedRecord";
    case RDSKIT_E_SCHEMA_VERSION: return "SchemaVersionMismatch";
    case RDSKIT_E_IO: return "Io";
    case RDSKIT_E_CONFIG: return "Config";
    case RDSKIT_E_ENCODER_INCONSISTENCY: return "EncoderInconsistency";
    case RDSKIT_E_PARTIAL_BATCH: return "PartialBatch";
    case RDSKIT_E_AUTH: return "Auth";
    case RDSKIT_E_NETWORK: return "Network";
    case RDSKIT_E_OUTPUT_EXISTS: return "OutputExists";
    case RDSKIT_E_INTERNAL: return "Internal";
    }
    return "Unknown";
}

const char* rdskit_last_error(void) { return t_last_error.c_str(); }

void rdskit_set_log_callback(rdskit_log_fn fn, void* user) {
    if (!fn) {
        rdskit::log::set_sink({});
        return;
    }
    rdskit::log::set_sink([fn, user](rdskit::log::Level level, std::string_view msg) {
        const std::string s(msg);
        fn(static_cast<rdskit_log_level>(level), s.c_str(), user);
    });
}

void rdskit_set_log_level(rdskit_log_level level) {
    rdskit::log::set_min_level(static_cast<rdskit::log::Level>(level));
}

rdskit_status rdskit_embedding_set_create(const double* data, size_t n, size_t dim, size_t* renormalized,
                                          rdskit_embedding_set** out) {
    RDSKIT_REQUIRE(data && out, "null argument");
    return guarded([&] {
        auto set = rdskit::EmbeddingSet::from_flat({data, n * dim}, dim, renormalized);
        *out = new rdskit_embedding_set{std::move(set)};
    });
}

void rdskit_embedding_set_destroy(rdskit_embedding_set* set) { delete set; }

size_t rdskit_embedding_set_size(const rdskit_embedding_set* set) { return set ? set->set.size() : 0; }

size_t rdskit_embedding_set_dim(const rdskit_embedding_set* set) { return set ? set->set.dim() : 0; }

rdskit_status rdskit_embedding_set_data(const rdskit_embedding_set* set, double* out) {
    RDSKIT_REQUIRE(set && out, "null argument");
    const auto d = set->set.data();
    std::copy(d.begin(), d.end(), out);
    return RDSKIT_OK;
}

rdskit_status rdskit_l2_normalize(const double* v, size_t dim, double* out) {
    RDSKIT_REQUIRE(v && out, "null argument");
    return guarded([&] { copy_out(rdskit::l2_normalize({v, dim}), out); });
}

rdskit_status rdskit_centroid(const rdskit_embedding_set* set, double* out) {
    RDSKIT_REQUIRE(set && out, "null argument");
    return guarded([&] { copy_out(rdskit::centroid(set->set), out); });
}

rdskit_status rdskit_weighted_centroid(const rdskit_embedding_set* set, const double* weights,
                                       size_t n_weights, double* out) {
    RDSKIT_REQUIRE(set && out, "null argument");
    return guarded([&] { copy_out(rdskit::weighted_centroid(set->set, weights_of(weights, n_weights, set->set.size())), out); });
}

rdskit_status rdskit_rds(const rdskit_embedding_set* set, double* out) {
    RDSKIT_REQUIRE(set && out, "null argument");
    return guarded([&] { *out = rdskit::rds(set->set); });
}

rdskit_status rdskit_rds_l2(const rdskit_embedding_set* set, double* out) {
    RDSKIT_REQUIRE(set && out, "null argument");
    return guarded([&] { *out = rdskit::rds_l2(set->set); });
}

rdskit_status rdskit_eigen_embed(const rdskit_embedding_set* set, double* out) {
    RDSKIT_REQUIRE(set && out, "null argument");
    return guarded([&] { *out = rdskit::eigen_embed(set->set); });
}

rdskit_status rdskit_rds_weighted(const rdskit_embedding_set* set, const double* weights, size_t n_weights,
                                  double* out) {
    RDSKIT_REQUIRE(set && out, "null argument");
    return guarded([&] { *out = rdskit::rds_weighted(set->set, weights_of(weights, n_weights, set->set.size())); });
}

rdskit_status rdskit_rds_per_sample(const rdskit_embedding_set* set, double* out) {
    RDSKIT_REQUIRE(set && out, "null argument");
    return guarded([&] { copy_out(rdskit::rds_per_sample(set->set), out); });
}

rdskit_status rdskit_rds_w_per_sample(const rdskit_embedding_set* set, const double* weights,
                                      size_t n_weights, double* out) {
    RDSKIT_REQUIRE(set && out, "null argument");
    return guarded([&] { copy_out(rdskit::rds_w_per_sample(set->set, weights_of(weights, n_weights, set->set.size())), out); });
}

rdskit_status rdskit_avg_pairwise_cosine(const rdskit_embedding_set* set, double* out) {
    RDSKIT_REQUIRE(set && out, "null argument");
    return guarded([&] { *out = rdskit::avg_pairwise_cosine(set->set); });
}

rdskit_status rdskit_probs_from_anll(const double* anlls, size_t n, double* out) {
    RDSKIT_REQUIRE(anlls && out, "null argument");
    return guarded([&] {
        const auto p = rdskit::probs_from_anll({anlls, n});
        std::copy(p.values().begin(), p.values().end(), out);
    });
}

rdskit_status rdskit_anll(const double* logprobs, size_t n_tokens, double* out) {
    RDSKIT_REQUIRE(out && (logprobs || n_tokens == 0), "null argument");
    return guarded([&] { *out = rdskit::anll(std::span<const double>(logprobs, n_tokens)); });
}

rdskit_status rdskit_nll(const double* logprobs, size_t n_tokens, double* out) {
    RDSKIT_REQUIRE(out && (logprobs || n_tokens == 0), "null argument");
    return guarded([&] { *out = rdskit::nll(std::span<const double>(logprobs, n_tokens)); });
}

rdskit_status rdskit_extract_answer(const char* text, const char* mode, char* buf, size_t buf_size,
                                    int* unanswerable) {
    RDSKIT_REQUIRE(text && mode && unanswerable, "null argument");
    return guarded([&] {
        const auto ans = rdskit::extract_answer(text, rdskit::parse_extraction_mode(mode));
        *unanswerable = ans.unanswerable ? 1 : 0;
        if (buf && buf_size) {
            const auto len = std::min(buf_size - 1, ans.canonical.size());
            std::memcpy(buf, ans.canonical.data(), len);
            buf[len] = '\0';
        }
    });
}

rdskit_status rdskit_self_consistency(const char* const* texts, size_t n, const char* mode, double* out) {
    RDSKIT_REQUIRE(texts && mode && out, "null argument");
    return guarded([&] {
        const auto m = rdskit::parse_extraction_mode(mode);
        std::vector<rdskit::ExtractedAnswer> answers;
        for (size_t i = 0; i < n; ++i) answers.push_back(rdskit::extract_answer(texts[i] ? texts[i] : "", m));
        *out = rdskit::self_consistency(answers);
    });
}

rdskit_status rdskit_rouge_l_f1(const char* candidate, const char* reference, double* out) {
    RDSKIT_REQUIRE(candidate && reference && out, "null argument");
    return guarded([&] { *out = rdskit::rouge_l_f1(candidate, reference); });
}

rdskit_status rdskit_auroc(const double* uncertainty, const int* incorrect, size_t n, double* out, int* defined) {
    RDSKIT_REQUIRE((n == 0 || (uncertainty && incorrect)) && out && defined, "null argument");
    return guarded([&] {
        std::vector<rdskit::LabeledScore> items(n);
        for (size_t i = 0; i < n; ++i) items[i] = {uncertainty[i], incorrect[i] == 0};
        const auto a = rdskit::auroc(items);
        *defined = a ? 1 : 0;
        if (a) *out = *a;
    });
}

rdskit_status rdskit_best_of_n_select(const double* scores, size_t n, size_t* index) {
    RDSKIT_REQUIRE(index && (scores || n == 0), "null argument");
    return guarded([&] { *index = rdskit::best_of_n_select({scores, n}); });
}

rdskit_status rdskit_regime_generate(const rdskit_regime_config* cfg, rdskit_embedding_set** out) {
    RDSKIT_REQUIRE(cfg && out, "null argument");
    return guarded([&] {
        rdskit::RegimeConfig c;
        switch (cfg->regime) {
        case RDSKIT_REGIME_COHERENT: c.regime = rdskit::Regime::Coherent; break;
        case RDSKIT_REGIME_HEMISPHERIC: c.regime = rdskit::Regime::Hemispheric; break;
        case RDSKIT_REGIME_OPPOSING: c.regime = rdskit::Regime::Opposing; break;
        default: throw rdskit::Error(rdskit::ErrorCode::Config, "unknown regime");
        }
        c.n = cfg->n;
        c.dim = cfg->dim;
        c.noise = cfg->noise;
        c.clusters = cfg->clusters;
        c.seed = cfg->seed;
        *out = new rdskit_embedding_set{rdskit::generate(c)};
    });
}

rdskit_status rdskit_cache_open(const char* dir, rdskit_cache** out) {
    RDSKIT_REQUIRE(out, "null argument");
    return guarded([&] {
        const std::filesystem::path root = dir && *dir ? std::filesystem::path(dir) : rdskit::EmbeddingCache::default_root();
        *out = new rdskit_cache{std::make_shared<rdskit::EmbeddingCache>(root)};
    });
}

void rdskit_cache_destroy(rdskit_cache* cache) { delete cache; }

rdskit_status rdskit_cache_store(rdskit_cache* cache, const char* encoder_id, const char* text, const double* v,
                                 size_t dim) {
    RDSKIT_REQUIRE(cache && encoder_id && text && v, "null argument");
    return guarded([&] { cache->cache->store(encoder_id, text, {v, dim}); });
}

rdskit_status rdskit_cache_lookup(rdskit_cache* cache, const char* encoder_id, const char* text, double* out,
                                  size_t capacity, size_t* dim, int* found) {
    RDSKIT_REQUIRE(cache && encoder_id && text && dim && found, "null argument");
    return guarded([&] {
        const auto v = cache->cache->lookup(encoder_id, text);
        *found = v ? 1 : 0;
        *dim = v ? v->size() : 0;
        if (v && out && capacity >= v->size()) std::copy(v->begin(), v->end(), out);
    });
}

void rdskit_endpoint_config_init(rdskit_endpoint_config* cfg) {
    if (!cfg) return;
    const rdskit::EndpointConfig d;
    cfg->base_url = nullptr;
    cfg->api_key = nullptr;
    cfg->model = "sentence-transformers/all-MiniLM-L6-v2";
    cfg->timeout_ms = d.timeout.count();
    cfg->max_retries = d.max_retries;
    cfg->max_in_flight = d.max_in_flight;
    cfg->batch_size = d.batch_size;
}

rdskit_status rdskit_embedder_create(const rdskit_endpoint_config* cfg, rdskit_cache* cache, rdskit_embedder** out) {
    RDSKIT_REQUIRE(cfg && out && cfg->base_url, "null argument");
    return guarded([&] {
        rdskit::EndpointConfig ec;
        ec.base_url = cfg->base_url;
        if (cfg->api_key) ec.api_key = cfg->api_key;
        if (cfg->model) ec.model = cfg->model;
        ec.timeout = std::chrono::milliseconds(cfg->timeout_ms);
        ec.max_retries = cfg->max_retries;
        ec.max_in_flight = cfg->max_in_flight;
        ec.batch_size = cfg->batch_size;
        ec.validate();
        auto transport = rdskit::make_http_transport(ec.base_url, ec.timeout);
        *out = new rdskit_embedder{
            std::make_unique<rdskit::EmbeddingClient>(ec, transport, cache ? cache->cache : nullptr)};
    });
}

void rdskit_embedder_destroy(rdskit_embedder* embedder) { delete embedder; }

rdskit_status rdskit_embedder_embed(rdskit_embedder* embedder, const char* const* texts, size_t n, double** out,
                                    size_t* dim) {
    RDSKIT_REQUIRE(embedder && texts && out && dim, "null argument");
    return guarded([&] {
        std::vector<std::string> in;
        for (size_t i = 0; i < n; ++i) in.emplace_back(texts[i] ? texts[i] : "");
        const auto vectors = embedder->client->embed_batch(in);
        *dim = vectors.front().size();
        auto* buf = static_cast<double*>(std::malloc(sizeof(double) * n * *dim));
        if (!buf) throw std::bad_alloc();
        for (size_t i = 0; i < n; ++i) std::copy(vectors[i].begin(), vectors[i].end(), buf + i * *dim);
        *out = buf;
    });
}

uint64_t rdskit_embedder_network_calls(const rdskit_embedder* embedder) {
    return embedder ? embedder->client->network_calls() : 0;
}

void rdskit_free(void* p) { std::free(p); }

rdskit_status rdskit_run_options_create(const char* config_file, rdskit_run_options** out) {
    RDSKIT_REQUIRE(out, "null argument");
    return guarded([&] {
        auto o = std::make_unique<rdskit_run_options>();
        if (config_file && *config_file) rdskit::apply_config_file(o->opts, config_file);
        rdskit::apply_environment(o->opts);
        *out = o.release();
    });
}

void rdskit_run_options_destroy(rdskit_run_options* opts) { delete opts; }

rdskit_status rdskit_run_options_set_string(rdskit_run_options* opts, const char* key, const char* value) {
    RDSKIT_REQUIRE(opts && key && value, "null argument");
    return guarded([&] {
        auto& o = opts->opts;
        const std::string_view k(key);
        const std::string v(value);
        if (k == "input") o.input = v;
        else if (k == "output") o.output = v;
        else if (k == "scores") o.scores = v;
        else if (k == "sidecar") o.sidecar = v;
        else if (k == "sidecar_out") o.sidecar_out = v;
        else if (k == "methods") o.methods = split_csv(v);
        else if (k == "extract") {
            if (!v.empty()) rdskit::parse_extraction_mode(v);
            o.extract = v;
        }
        else if (k == "embed_url") o.embed.base_url = v;
        else if (k == "embed_model") o.embed.model = v;
        else if (k == "llm_url") o.llm.base_url = v;
        else if (k == "llm_model") o.llm.model = v;
        else if (k == "api_key") o.embed.api_key = o.llm.api_key = v;
        else if (k == "cache_dir") o.cache_dir = v;
        else if (k == "regimes") {
            o.regimes.clear();
            for (const auto& r : split_csv(v)) o.regimes.push_back(rdskit::parse_regime(r));
        } else if (k == "noise") {
            o.sim_noise.clear();
            for (const auto& s : split_csv(v)) {
                char* end = nullptr;
                const double x = std::strtod(s.c_str(), &end);
                if (end == s.c_str() || *end) throw rdskit::Error(rdskit::ErrorCode::Config, "bad noise value '" + s + "'");
                o.sim_noise.push_back(x);
            }
        } else {
            throw rdskit::Error(rdskit::ErrorCode::InvalidArgument, "unknown string option '" + std::string(k) + "'");
        }
    });
}

rdskit_status rdskit_run_options_set_int(rdskit_run_options* opts, const char* key, int64_t value) {
    RDSKIT_REQUIRE(opts && key, "null argument");
    return guarded([&] {
        auto& o = opts->opts;
        const std::string_view k(key);
        auto non_negative = [&] {
            if (value < 0) throw rdskit::Error(rdskit::ErrorCode::Config, std::string(k) + " must be >= 0");
            return static_cast<std::size_t>(value);
        };
        if (k == "n_samples") o.sampling.n = static_cast<int>(value), o.sim_n = non_negative();
        else if (k == "max_tokens") o.sampling.max_tokens = static_cast<int>(value);
        else if (k == "seed") o.seed = static_cast<std::uint64_t>(value);
        else if (k == "workers") o.workers = static_cast<int>(value);
        else if (k == "strict") o.strict = value != 0;
        else if (k == "force") o.force = value != 0;
        else if (k == "want_logprobs") o.sampling.want_logprobs = value != 0;
        else if (k == "use_cache") o.use_cache = value != 0;
        else if (k == "max_retries") o.embed.max_retries = o.llm.max_retries = static_cast<int>(value);
        else if (k == "max_in_flight") o.embed.max_in_flight = o.llm.max_in_flight = static_cast<int>(value);
        else if (k == "batch_size") o.embed.batch_size = non_negative();
        else if (k == "timeout_ms") o.embed.timeout = o.llm.timeout = std::chrono::milliseconds(value);
        else if (k == "dim") o.sim_dim = non_negative();
        else if (k == "clusters") o.sim_clusters = non_negative();
        else if (k == "seeds") o.sim_seeds = non_negative();
        else throw rdskit::Error(rdskit::ErrorCode::InvalidArgument, "unknown integer option '" + std::string(k) + "'");
    });
}

rdskit_status rdskit_run_options_set_double(rdskit_run_options* opts, const char* key, double value) {
    RDSKIT_REQUIRE(opts && key, "null argument");
    return guarded([&] {
        const std::string_view k(key);
        if (k == "temperature") opts->opts.sampling.temperature = value;
        else if (k == "rouge_threshold") opts->opts.rouge_threshold = value;
        else throw rdskit::Error(rdskit::ErrorCode::InvalidArgument, "unknown real option '" + std::string(k) + "'");
    });
}

rdskit_status rdskit_run_options_set_correctness(rdskit_run_options* opts, rdskit_correctness mode) {
    RDSKIT_REQUIRE(opts, "null argument");
    switch (mode) {
    case RDSKIT_CORRECTNESS_FROM_RECORD: opts->opts.correctness.reset(); break;
    case RDSKIT_CORRECTNESS_EXACT: opts->opts.correctness = rdskit::CorrectnessKind::ExactMatch; break;
    case RDSKIT_CORRECTNESS_ROUGE: opts->opts.correctness = rdskit::CorrectnessKind::RougeGate; break;
    default: return fail(RDSKIT_E_INVALID_ARGUMENT, "unknown correctness mode");
    }
    return RDSKIT_OK;
}

rdskit_status rdskit_cmd_score(const rdskit_run_options* opts, rdskit_run_summary* summary) {
    return run(opts, summary, [](const rdskit::RunOptions& o) { return rdskit::cmd_score(o); });
}

rdskit_status rdskit_cmd_evaluate(const rdskit_run_options* opts, rdskit_run_summary* summary) {
    return run(opts, summary, [](const rdskit::RunOptions& o) { return rdskit::cmd_evaluate(o); });
}

rdskit_status rdskit_cmd_bestofn(const rdskit_run_options* opts, rdskit_run_summary* summary) {
    return run(opts, summary, [](const rdskit::RunOptions& o) { return rdskit::cmd_bestofn(o); });
}

rdskit_status rdskit_cmd_embed(const rdskit_run_options* opts, rdskit_run_summary* summary) {
    return run(opts, summary, [](const rdskit::RunOptions& o) { return rdskit::cmd_embed(o); });
}

rdskit_status rdskit_cmd_sample(const rdskit_run_options* opts, rdskit_run_summary* summary) {
    return run(opts, summary, [](const rdskit::RunOptions& o) { return rdskit::cmd_sample(o); });
}

rdskit_status rdskit_cmd_simulate(const rdskit_run_options* opts, rdskit_run_summary* summary) {
    return run(opts, summary, [](const rdskit::RunOptions& o) { return rdskit::cmd_simulate(o); });
}

} // extern "C"
