#pragma once

// OpenAI-compatible producers: /v1/embeddings and /v1/chat/completions.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "clients/transport.hpp"
#include "core/error.hpp"
#include "dataio/cache.hpp"
#include "dataio/records.hpp"

namespace rdskit {

struct EndpointConfig {
    std::string base_url;
    std::string api_key;
    std::string model;
    std::chrono::milliseconds timeout{60000};
    int max_retries = 3;
    int max_in_flight = 4;
    std::size_t batch_size = 64;  // embedding texts per request
    std::chrono::milliseconds backoff{250};  // first retry delay, doubled per retry

    void validate() const;
};

struct SamplingConfig {
    int n = 10;
    double temperature = 1.0;
    int max_tokens = 256;
    bool want_logprobs = true;

    void validate() const;
};

/// Thrown when the endpoint returns fewer completions than requested.
class PartialBatchError : public Error {
public:
    PartialBatchError(std::string what, std::vector<GenerationSample> got)
        : Error(ErrorCode::PartialBatch, what), samples(std::move(got)) {}

    std::vector<GenerationSample> samples;
};

/// Caps the number of requests outstanding at once.
class InFlightLimiter {
public:
    explicit InFlightLimiter(int limit) : limit_(limit) {}

    void acquire() {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return active_ < limit_; });
        ++active_;
    }
    void release() {
        {
            std::lock_guard lock(m_);
            --active_;
        }
        cv_.notify_one();
    }

private:
    std::mutex m_;
    std::condition_variable cv_;
    int active_ = 0;
    int limit_;
};

/// Shared retry/auth handling for both clients.
class EndpointSession {
public:
    EndpointSession(EndpointConfig cfg, std::shared_ptr<Transport> transport);

    const EndpointConfig& config() const noexcept { return cfg_; }

    /// One request, retried with exponential backoff on transient failures
    /// (no response, 408, 429, 5xx). 401/403 throw Auth immediately, other
    /// statuses throw Network.
    HttpResponse post_json(const std::string& route, const std::string& body);

    /// Sleeps for the backoff of retry number `attempt` (0-based).
    void backoff(int attempt) const;

    std::uint64_t network_calls() const noexcept { return calls_.load(); }

private:
    EndpointConfig cfg_;
    std::shared_ptr<Transport> transport_;
    InFlightLimiter limiter_;
    std::atomic<std::uint64_t> calls_{0};
};

class EmbeddingClient {
public:
    /// `cache` may be null.
    EmbeddingClient(EndpointConfig cfg, std::shared_ptr<Transport> transport,
                    std::shared_ptr<EmbeddingCache> cache);

    /// One vector per text in order. Cached texts are not sent; novel texts
    /// are de-duplicated, chunked by batch_size and sent with at most
    /// max_in_flight concurrent requests. Items missing from a response are
    /// re-requested on their own.
    std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts);

    std::uint64_t network_calls() const noexcept { return session_.network_calls(); }
    const std::string& encoder_id() const noexcept { return session_.config().model; }

private:
    void fetch_chunk(const std::vector<std::string>& texts, std::vector<std::vector<double>>& out);

    EndpointSession session_;
    std::shared_ptr<EmbeddingCache> cache_;
};

class SamplingClient {
public:
    SamplingClient(EndpointConfig cfg, std::shared_ptr<Transport> transport);

    /// Throws PartialBatchError (carrying what arrived) if fewer than sc.n
    /// completions come back.
    std::vector<GenerationSample> sample_generations(const SamplingConfig& sc, const std::string& prompt);

    /// Temperature 0, n = 1.
    GenerationSample greedy(const std::string& prompt, int max_tokens, bool want_logprobs = true);

    std::uint64_t network_calls() const noexcept { return session_.network_calls(); }

private:
    EndpointSession session_;
};

} // namespace rdskit
