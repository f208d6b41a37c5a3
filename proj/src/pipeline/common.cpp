#include "pipeline/common.hpp"

#include <fmt/format.h>

#include "core/log.hpp"
#include "dataio/sidecar.hpp"

namespace rdskit::detail {

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    const auto n = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(workers, 1)));
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex m;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < n; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i; (i = next++) < count;) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(m);
                        if (!error) error = std::current_exception();
                        next = count;
                        return;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

bool is_stdout(const std::filesystem::path& path) { return path.empty() || path == "-"; }

void check_output(const std::filesystem::path& path, bool force) {
    if (is_stdout(path)) return;
    if (std::filesystem::exists(path) && !force) {
        throw Error(ErrorCode::OutputExists, path.string() + " already exists (pass --force to overwrite)");
    }
}

Output::Output(const std::filesystem::path& path, bool force) : path_(path) {
    check_output(path, force);
    if (!is_stdout(path)) {
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
        if (!*file_) throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
}

void Output::close() {
    if (file_) {
        file_->close();
        if (!*file_) throw Error(ErrorCode::Io, "failed writing " + path_.string());
    } else {
        std::cout.flush();
    }
}

void add_diagnostic(RunSummary& summary, Diagnostic d) {
    std::string where;
    if (d.line) where += fmt::format("line {}", d.line);
    if (!d.id.empty()) where += fmt::format("{}record {}", where.empty() ? "" : ", ", d.id);
    log::warn(where.empty() ? d.message : where + ": " + d.message);
    summary.diagnostics.push_back(std::move(d));
}

std::vector<PromptRecord> load_records(const RunOptions& opts, RunSummary& summary, bool prompts_only) {
    if (opts.input.empty()) throw Error(ErrorCode::Config, "no input file given (--input)");
    ReadOptions ro;
    ro.strict = opts.strict;
    ro.prompts_only = prompts_only;
    auto result = read_records(opts.input, ro);
    summary.records_read += result.records.size() + result.diagnostics.size();
    summary.skipped += result.diagnostics.size();
    for (auto& d : result.diagnostics) add_diagnostic(summary, std::move(d));
    if (!opts.sidecar.empty()) {
        const auto filled = attach_sidecar(result.records, read_sidecar(opts.sidecar));
        log::info(fmt::format("attached {} embeddings from {}", filled, opts.sidecar.string()));
    }
    return std::move(result.records);
}

void embed_missing(std::vector<PromptRecord>& records, const RunOptions& opts, RunSummary& summary) {
    std::vector<std::string> texts;
    for (const auto& r : records) {
        for (const auto& s : r.samples) {
            if (!s.embedding) texts.push_back(s.text);
        }
    }
    if (texts.empty()) return;

    const bool have_endpoint = !opts.embed.base_url.empty() || opts.embed_transport;
    std::shared_ptr<EmbeddingCache> cache;
    if (opts.use_cache) {
        cache = std::make_shared<EmbeddingCache>(opts.cache_dir.empty() ? EmbeddingCache::default_root()
                                                                        : opts.cache_dir);
    }

    std::vector<std::vector<double>> vectors;
    if (have_endpoint) {
        auto cfg = opts.embed;
        if (cfg.base_url.empty()) cfg.base_url = "http://localhost";
        auto transport = opts.embed_transport ? opts.embed_transport : make_http_transport(cfg.base_url, cfg.timeout);
        EmbeddingClient client(cfg, transport, cache);
        vectors = client.embed_batch(texts);
        summary.network_calls += client.network_calls();
    } else {
        std::size_t misses = 0;
        for (const auto& t : texts) {
            std::optional<std::vector<double>> v;
            if (cache) v = cache->lookup(opts.embed.model, t);
            if (!v) {
                ++misses;
                vectors.emplace_back();
            } else {
                vectors.push_back(std::move(*v));
            }
        }
        if (misses) {
            throw Error(ErrorCode::Config,
                        fmt::format("{} sample texts have no embedding and no embedding endpoint is configured; "
                                    "set RDSKIT_EMBED_URL or pass --embed-url (or supply --sidecar)",
                                    misses));
        }
    }

    std::size_t k = 0;
    for (auto& r : records) {
        for (auto& s : r.samples) {
            if (!s.embedding) s.embedding = std::move(vectors[k++]);
        }
    }
}

CorrectnessMode correctness_of(const RunOptions& opts, const PromptRecord& r) {
    const auto kind = opts.correctness.value_or(r.correctness_mode);
    return correctness_for(kind, opts.rouge_threshold, extraction_for(opts, kind));
}

} // namespace rdskit::detail
