#include "clients/clients.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>

#include "core/log.hpp"

namespace rdskit {

namespace {

bool transient(int status) {
    return status == 0 || status == 408 || status == 429 || status >= 500;
}

std::string snippet(const std::string& body) {
    return body.size() > 200 ? body.substr(0, 200) + "..." : body;
}

Json parse_body(const HttpResponse& res) {
    try {
        return Json::parse(res.body);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::Network, std::string("endpoint returned invalid JSON: ") + e.what());
    }
}

} // namespace

void EndpointConfig::validate() const {
    if (base_url.empty()) throw Error(ErrorCode::Config, "endpoint base URL is empty");
    parse_base_url(base_url);
    if (timeout.count() <= 0) throw Error(ErrorCode::Config, "endpoint timeout must be > 0");
    if (max_retries < 0) throw Error(ErrorCode::Config, "max_retries must be >= 0");
    if (max_in_flight < 1) throw Error(ErrorCode::Config, "max_in_flight must be >= 1");
    if (batch_size < 1) throw Error(ErrorCode::Config, "batch size must be >= 1");
}

void SamplingConfig::validate() const {
    if (n < 1) throw Error(ErrorCode::Config, "number of samples must be >= 1");
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw Error(ErrorCode::Config, "temperature must be >= 0");
    if (max_tokens < 1) throw Error(ErrorCode::Config, "max_tokens must be >= 1");
}

EndpointSession::EndpointSession(EndpointConfig cfg, std::shared_ptr<Transport> transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)), limiter_(cfg_.max_in_flight) {
    cfg_.validate();
    if (!transport_) throw Error(ErrorCode::Config, "no transport configured");
}

void EndpointSession::backoff(int attempt) const {
    const auto delay = cfg_.backoff * (1LL << std::min(attempt, 16));
    std::this_thread::sleep_for(delay);
}

HttpResponse EndpointSession::post_json(const std::string& route, const std::string& body) {
    HttpRequest req;
    req.path = route_path(cfg_.base_url, route);
    req.body = body;
    req.headers.emplace_back("Content-Type", "application/json");
    if (!cfg_.api_key.empty()) req.headers.emplace_back("Authorization", "Bearer " + cfg_.api_key);

    for (int attempt = 0;; ++attempt) {
        limiter_.acquire();
        HttpResponse res;
        try {
            ++calls_;
            res = transport_->post(req);
        } catch (...) {
            limiter_.release();
            throw;
        }
        limiter_.release();

        if (res.status == 200) return res;
        if (res.status == 401 || res.status == 403) {
            throw Error(ErrorCode::Auth, fmt::format("{} rejected the credentials (HTTP {})", req.path, res.status));
        }
        if (!transient(res.status)) {
            throw Error(ErrorCode::Network, fmt::format("{} failed with HTTP {}: {}", req.path, res.status, snippet(res.body)));
        }
        if (attempt >= cfg_.max_retries) {
            throw Error(ErrorCode::Network,
                        fmt::format("{} failed after {} attempts (last: {})", req.path, attempt + 1,
                                    res.status == 0 ? res.error : "HTTP " + std::to_string(res.status)));
        }
        log::debug(fmt::format("retrying {} (attempt {})", req.path, attempt + 2));
        backoff(attempt);
    }
}

EmbeddingClient::EmbeddingClient(EndpointConfig cfg, std::shared_ptr<Transport> transport,
                                 std::shared_ptr<EmbeddingCache> cache)
    : session_(std::move(cfg), std::move(transport)), cache_(std::move(cache)) {}

void EmbeddingClient::fetch_chunk(const std::vector<std::string>& texts,
                                  std::vector<std::vector<double>>& out) {
    out.assign(texts.size(), {});
    std::vector<std::size_t> pending(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) pending[i] = i;

    for (int round = 0; !pending.empty(); ++round) {
        Json body;
        body["model"] = session_.config().model;
        Json input = Json::array();
        for (auto i : pending) input.push_back(texts[i]);
        body["input"] = std::move(input);

        const auto res = session_.post_json("embeddings", dump_line(body));
        const auto j = parse_body(res);
        const auto data = j.find("data");
        if (data == j.end() || !data->is_array()) throw Error(ErrorCode::Network, "embedding response has no \"data\" array");

        std::optional<std::size_t> dim;
        std::vector<bool> got(pending.size(), false);
        for (std::size_t pos = 0; pos < data->size(); ++pos) {
            const auto& item = (*data)[pos];
            std::size_t idx = pos;
            if (const auto it = item.find("index"); it != item.end() && it->is_number_unsigned()) {
                idx = it->get<std::size_t>();
            }
            if (idx >= pending.size()) throw Error(ErrorCode::Network, "embedding response index out of range");
            const auto emb = item.find("embedding");
            if (emb == item.end() || !emb->is_array()) throw Error(ErrorCode::Network, "embedding response item lacks an embedding");
            std::vector<double> v;
            v.reserve(emb->size());
            for (const auto& x : *emb) {
                if (!x.is_number()) throw Error(ErrorCode::Network, "embedding contains a non-number");
                v.push_back(x.get<double>());
            }
            if (dim && *dim != v.size()) {
                throw Error(ErrorCode::EncoderInconsistency,
                            fmt::format("endpoint returned embeddings of dimension {} and {} in one response", *dim, v.size()));
            }
            dim = v.size();
            const auto slot = pending[idx];
            if (cache_) cache_->store(encoder_id(), texts[slot], v);
            out[slot] = std::move(v);
            got[idx] = true;
        }

        std::vector<std::size_t> still;
        for (std::size_t k = 0; k < pending.size(); ++k) {
            if (!got[k]) still.push_back(pending[k]);
        }
        if (!still.empty()) {
            if (round >= session_.config().max_retries) {
                throw Error(ErrorCode::PartialBatch,
                            fmt::format("endpoint kept omitting {} of {} texts", still.size(), texts.size()));
            }
            log::warn(fmt::format("embedding response missed {} texts; re-requesting them", still.size()));
            session_.backoff(round);
        }
        pending = std::move(still);
    }
}

std::vector<std::vector<double>> EmbeddingClient::embed_batch(const std::vector<std::string>& texts) {
    if (texts.empty()) throw Error(ErrorCode::InvalidArgument, "embed_batch needs at least one text");

    std::vector<std::vector<double>> result(texts.size());
    std::vector<bool> have(texts.size(), false);
    std::vector<std::string> novel;
    std::unordered_map<std::string, std::size_t> novel_index;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (cache_) {
            if (auto v = cache_->lookup(encoder_id(), texts[i])) {
                result[i] = std::move(*v);
                have[i] = true;
                continue;
            }
        }
        if (novel_index.emplace(texts[i], novel.size()).second) novel.push_back(texts[i]);
    }

    if (!novel.empty()) {
        const std::size_t bs = session_.config().batch_size;
        std::vector<std::vector<std::string>> chunks;
        for (std::size_t start = 0; start < novel.size(); start += bs) {
            chunks.emplace_back(novel.begin() + static_cast<std::ptrdiff_t>(start),
                                novel.begin() + static_cast<std::ptrdiff_t>(std::min(novel.size(), start + bs)));
        }
        std::vector<std::vector<std::vector<double>>> fetched(chunks.size());
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                const auto c = next++;
                if (c >= chunks.size() || failed.load()) return;
                try {
                    fetch_chunk(chunks[c], fetched[c]);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed = true;
                    return;
                }
            }
        };
        const auto n_workers = std::min<std::size_t>(chunks.size(), static_cast<std::size_t>(session_.config().max_in_flight));
        if (n_workers <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        }
        if (first_error) std::rethrow_exception(first_error);

        for (std::size_t i = 0; i < texts.size(); ++i) {
            if (have[i]) continue;
            const auto k = novel_index.at(texts[i]);
            result[i] = fetched[k / bs][k % bs];
        }
    }

    const auto dim = result.front().size();
    for (const auto& v : result) {
        if (v.size() != dim) {
            throw Error(ErrorCode::EncoderInconsistency,
                        fmt::format("embeddings of dimension {} and {} in one batch", dim, v.size()));
        }
    }
    return result;
}

SamplingClient::SamplingClient(EndpointConfig cfg, std::shared_ptr<Transport> transport)
    : session_(std::move(cfg), std::move(transport)) {}

std::vector<GenerationSample> SamplingClient::sample_generations(const SamplingConfig& sc,
                                                                 const std::string& prompt) {
    sc.validate();
    if (prompt.empty()) throw Error(ErrorCode::InvalidArgument, "prompt is empty");

    Json body;
    body["model"] = session_.config().model;
    body["messages"] = Json::array({Json{{"role", "user"}, {"content", prompt}}});
    body["n"] = sc.n;
    body["temperature"] = sc.temperature;
    body["max_tokens"] = sc.max_tokens;
    body["logprobs"] = sc.want_logprobs;

    const auto j = parse_body(session_.post_json("chat/completions", dump_line(body)));
    const auto choices = j.find("choices");
    if (choices == j.end() || !choices->is_array()) throw Error(ErrorCode::Network, "completion response has no \"choices\" array");

    std::vector<std::pair<std::size_t, GenerationSample>> indexed;
    bool missing_logprobs = false;
    for (std::size_t pos = 0; pos < choices->size(); ++pos) {
        const auto& c = (*choices)[pos];
        std::size_t idx = pos;
        if (const auto it = c.find("index"); it != c.end() && it->is_number_unsigned()) idx = it->get<std::size_t>();
        GenerationSample s;
        if (const auto msg = c.find("message"); msg != c.end() && msg->is_object()) {
            if (const auto content = msg->find("content"); content != msg->end() && content->is_string()) {
                s.text = content->get<std::string>();
            }
        }
        if (sc.want_logprobs) {
            const auto lp = c.find("logprobs");
            const Json* content = nullptr;
            if (lp != c.end() && lp->is_object()) {
                if (const auto it = lp->find("content"); it != lp->end() && it->is_array()) content = &*it;
            }
            if (content) {
                std::vector<double> values;
                for (const auto& tok : *content) {
                    const auto v = tok.find("logprob");
                    if (v == tok.end() || !v->is_number()) {
                        values.clear();
                        break;
                    }
                    values.push_back(v->get<double>());
                }
                if (!values.empty()) s.token_logprobs = std::move(values);
            }
            if (!s.token_logprobs) missing_logprobs = true;
        }
        indexed.emplace_back(idx, std::move(s));
    }
    std::stable_sort(indexed.begin(), indexed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<GenerationSample> out;
    out.reserve(indexed.size());
    for (auto& [_, s] : indexed) out.push_back(std::move(s));

    if (missing_logprobs) {
        log::warn("endpoint did not return token log-probabilities; weighted scores will be unavailable");
    }
    if (out.size() < static_cast<std::size_t>(sc.n)) {
        throw PartialBatchError(fmt::format("requested {} completions, endpoint returned {}", sc.n, out.size()),
                                std::move(out));
    }
    out.resize(static_cast<std::size_t>(sc.n));
    return out;
}

GenerationSample SamplingClient::greedy(const std::string& prompt, int max_tokens, bool want_logprobs) {
    SamplingConfig sc;
    sc.n = 1;
    sc.temperature = 0.0;
    sc.max_tokens = max_tokens;
    sc.want_logprobs = want_logprobs;
    return sample_generations(sc, prompt).front();
}

} // namespace rdskit
