#include <doctest.h>

#include <httplib.h>

#include <nlohmann/json.hpp>

#include <thread>

#include "clients/clients.hpp"
#include "core/error.hpp"
#include "core/log.hpp"
#include "fake_endpoint.hpp"
#include "temp_dir.hpp"

using namespace rdskit;

namespace {

EndpointConfig test_config(int max_in_flight = 4, std::size_t batch = 64) {
    EndpointConfig c;
    c.base_url = "http://fake.invalid:8000";
    c.api_key = "sk-test";
    c.model = "test-encoder";
    c.max_in_flight = max_in_flight;
    c.batch_size = batch;
    c.backoff = std::chrono::milliseconds(1);
    return c;
}

std::vector<std::string> texts(std::size_t n, const std::string& prefix = "t") {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
    return v;
}

struct QuietLog {
    QuietLog() {
        log::set_sink([](log::Level, std::string_view) {});
    }
    ~QuietLog() { log::set_sink({}); }
};

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an rdskit::Error");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("config validation") {
    auto c = test_config();
    CHECK_NOTHROW(c.validate());
    c.max_in_flight = 0;
    CHECK(code_of([&] { c.validate(); }) == ErrorCode::Config);
    c = test_config();
    c.timeout = std::chrono::milliseconds(0);
    CHECK(code_of([&] { c.validate(); }) == ErrorCode::Config);
    c = test_config();
    c.max_retries = -1;
    CHECK(code_of([&] { c.validate(); }) == ErrorCode::Config);

    SamplingConfig s;
    CHECK(s.n == 10);
    CHECK(s.temperature == 1.0);
    CHECK(s.want_logprobs);
    s.n = 0;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::Config);
}

TEST_CASE("base URL routing") {
    CHECK(route_path("http://h:8000", "embeddings") == "/v1/embeddings");
    CHECK(route_path("http://h:8000/", "embeddings") == "/v1/embeddings");
    CHECK(route_path("https://api.example.com/v1", "chat/completions") == "/v1/chat/completions");
    CHECK(route_path("http://h/proxy/v1/", "embeddings") == "/proxy/v1/embeddings");
    CHECK(parse_base_url("http://h:8000/x").origin == "http://h:8000");
    CHECK(code_of([] { parse_base_url("ftp://h"); }) == ErrorCode::Config);
    CHECK(code_of([] { parse_base_url("not a url"); }) == ErrorCode::Config);
}

TEST_CASE("embed_batch preserves order and sends the bearer key") {
    auto ep = std::make_shared<fake::EmbeddingEndpoint>(6);
    EmbeddingClient client(test_config(), ep, nullptr);
    const auto in = texts(5);
    const auto out = client.embed_batch(in);
    REQUIRE(out.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(out[i] == fake::embedding_of(in[i], 6));
    CHECK(ep->calls() == 1);
    CHECK(ep->paths().at(0) == "/v1/embeddings");
    CHECK(ep->auth_headers().at(0) == "Bearer sk-test");
}

TEST_CASE("cached texts are never sent") {
    TempDir tmp;
    auto cache = std::make_shared<EmbeddingCache>(tmp.path());
    auto ep = std::make_shared<fake::EmbeddingEndpoint>(4);
    EmbeddingClient client(test_config(), ep, cache);

    cache->store("test-encoder", "a", fake::embedding_of("a", 4));
    cache->store("test-encoder", "b", fake::embedding_of("b", 4));
    client.embed_batch({"a", "b", "novel"});
    REQUIRE(ep->calls() == 1);
    CHECK(ep->requests()[0] == std::vector<std::string>{"novel"});

    // Everything is cached now.
    client.embed_batch({"novel", "a", "b", "a"});
    CHECK(ep->calls() == 1);
    CHECK(client.network_calls() == 1);
}

TEST_CASE("duplicate novel texts are requested once") {
    auto ep = std::make_shared<fake::EmbeddingEndpoint>(3);
    EmbeddingClient client(test_config(), ep, nullptr);
    const auto out = client.embed_batch({"x", "y", "x", "x"});
    CHECK(ep->requests().at(0) == std::vector<std::string>{"x", "y"});
    CHECK(out[2] == out[0]);
}

TEST_CASE("batches are chunked and in-flight requests stay under the limit") {
    for (int limit : {1, 2, 3}) {
        auto ep = std::make_shared<fake::EmbeddingEndpoint>(4);
        ep->latency = std::chrono::milliseconds(15);
        EmbeddingClient client(test_config(limit, 5), ep, nullptr);
        const auto in = texts(43);
        const auto out = client.embed_batch(in);
        CHECK(ep->calls() == 9);
        CHECK(ep->max_in_flight() <= limit);
        CHECK(ep->max_in_flight() >= 1);
        for (std::size_t i = 0; i < in.size(); ++i) CHECK(out[i] == fake::embedding_of(in[i], 4));
        for (const auto& r : ep->requests()) CHECK(r.size() <= 5);
    }
}

TEST_CASE("partial responses re-request only the missing texts") {
    QuietLog quiet;
    auto ep = std::make_shared<fake::EmbeddingEndpoint>(4);
    ep->drop_once = {"t1", "t3"};
    EmbeddingClient client(test_config(), ep, nullptr);
    const auto in = texts(5);
    const auto out = client.embed_batch(in);
    const auto reqs = ep->requests();
    REQUIRE(reqs.size() == 2);
    CHECK(reqs[0] == in);
    CHECK(reqs[1] == std::vector<std::string>{"t1", "t3"});
    for (std::size_t i = 0; i < in.size(); ++i) CHECK(out[i] == fake::embedding_of(in[i], 4));
}

TEST_CASE("persistent omission gives PartialBatch") {
    QuietLog quiet;
    auto ep = std::make_shared<fake::EmbeddingEndpoint>(4);
    ep->drop_once = {"t0", "t0", "t0", "t0", "t0"};
    auto cfg = test_config();
    cfg.max_retries = 2;
    EmbeddingClient client(cfg, ep, nullptr);
    CHECK(code_of([&] { client.embed_batch(texts(2)); }) == ErrorCode::PartialBatch);
    CHECK(ep->calls() == 3);
}

TEST_CASE("transient failures are retried, auth failures are not") {
    QuietLog quiet;
    SUBCASE("503 then 429 then success") {
        auto ep = std::make_shared<fake::EmbeddingEndpoint>(2);
        ep->fail_statuses = {503, 429};
        EmbeddingClient client(test_config(), ep, nullptr);
        CHECK(client.embed_batch({"a"}).size() == 1);
        CHECK(ep->calls() == 3);
    }
    SUBCASE("retries exhausted") {
        auto ep = std::make_shared<fake::EmbeddingEndpoint>(2);
        ep->fail_statuses = {500, 500, 500, 500, 500};
        auto cfg = test_config();
        cfg.max_retries = 2;
        EmbeddingClient client(cfg, ep, nullptr);
        CHECK(code_of([&] { client.embed_batch({"a"}); }) == ErrorCode::Network);
        CHECK(ep->calls() == 3);
    }
    SUBCASE("401 is fatal immediately") {
        auto ep = std::make_shared<fake::EmbeddingEndpoint>(2);
        ep->fail_statuses = {401};
        EmbeddingClient client(test_config(), ep, nullptr);
        CHECK(code_of([&] { client.embed_batch({"a"}); }) == ErrorCode::Auth);
        CHECK(ep->calls() == 1);
    }
    SUBCASE("400 is not retried") {
        auto ep = std::make_shared<fake::EmbeddingEndpoint>(2);
        ep->fail_statuses = {400};
        EmbeddingClient client(test_config(), ep, nullptr);
        CHECK(code_of([&] { client.embed_batch({"a"}); }) == ErrorCode::Network);
        CHECK(ep->calls() == 1);
    }
}

class MixedDims : public Transport {
public:
    HttpResponse post(const HttpRequest&) override {
        nlohmann::json data = nlohmann::json::array();
        data.push_back({{"index", 0}, {"embedding", std::vector<double>(384, 0.1)}});
        data.push_back({{"index", 1}, {"embedding", std::vector<double>(384, 0.1)}});
        data.push_back({{"index", 2}, {"embedding", std::vector<double>(512, 0.1)}});
        return {200, nlohmann::json{{"data", data}}.dump(), {}};
    }
};

TEST_CASE("mixed dimensions in one response") {
    EmbeddingClient client(test_config(), std::make_shared<MixedDims>(), nullptr);
    CHECK(code_of([&] { client.embed_batch({"a", "b", "c"}); }) == ErrorCode::EncoderInconsistency);
}

TEST_CASE("sampling client") {
    QuietLog quiet;
    auto ep = std::make_shared<fake::ChatEndpoint>();
    auto cfg = test_config();
    cfg.model = "chat-model";
    SamplingClient client(cfg, ep);
    SamplingConfig sc;

    SUBCASE("n completions with log-probs") {
        const auto s = client.sample_generations(sc, "Q?");
        REQUIRE(s.size() == 10);
        for (std::size_t k = 0; k < s.size(); ++k) {
            CHECK(s[k].text == "answer " + std::to_string(k));
            REQUIRE(s[k].token_logprobs);
            CHECK(s[k].token_logprobs->size() == 2);
            CHECK_FALSE(s[k].embedding);
        }
        const auto body = ep->bodies().at(0);
        CHECK(body["model"] == "chat-model");
        CHECK(body["n"] == 10);
        CHECK(body["temperature"] == 1.0);
        CHECK(body["logprobs"] == true);
        CHECK(body["messages"][0]["content"] == "Q?");
    }
    SUBCASE("short response") {
        ep->cap = 7;
        try {
            client.sample_generations(sc, "Q?");
            FAIL("expected PartialBatchError");
        } catch (const PartialBatchError& e) {
            CHECK(e.code() == ErrorCode::PartialBatch);
            CHECK(e.samples.size() == 7);
        }
    }
    SUBCASE("log-probs not requested") {
        sc.want_logprobs = false;
        for (const auto& s : client.sample_generations(sc, "Q?")) CHECK_FALSE(s.token_logprobs);
    }
    SUBCASE("endpoint without log-probs") {
        ep->with_logprobs = false;
        const auto s = client.sample_generations(sc, "Q?");
        CHECK(s.size() == 10);
        for (const auto& x : s) CHECK_FALSE(x.token_logprobs);
    }
    SUBCASE("greedy is a separate temperature-0 call") {
        const auto g = client.greedy("Q?", 32);
        CHECK(g.text == "answer 0");
        const auto body = ep->bodies().at(0);
        CHECK(body["temperature"] == 0.0);
        CHECK(body["n"] == 1);
        CHECK(body["max_tokens"] == 32);
    }
}

TEST_CASE("HTTP transport against a local server") {
    httplib::Server server;
    std::atomic<int> hits{0};
    std::string seen_auth;
    server.Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
        ++hits;
        seen_auth = req.get_header_value("Authorization");
        const auto body = nlohmann::json::parse(req.body);
        nlohmann::json data = nlohmann::json::array();
        for (std::size_t i = 0; i < body["input"].size(); ++i)
            data.push_back({{"index", i}, {"embedding", {1.0, static_cast<double>(i)}}});
        res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    auto cfg = test_config();
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.timeout = std::chrono::milliseconds(5000);
    EmbeddingClient client(cfg, make_http_transport(cfg.base_url, cfg.timeout), nullptr);
    const auto out = client.embed_batch({"a", "b"});
    server.stop();
    th.join();

    REQUIRE(out.size() == 2);
    CHECK(out[1] == std::vector<double>{1.0, 1.0});
    CHECK(hits == 1);
    CHECK(seen_auth == "Bearer sk-test");
}

TEST_CASE("HTTP transport reports refused connections as retryable") {
    QuietLog quiet;
    auto cfg = test_config();
    cfg.base_url = "http://127.0.0.1:1";
    cfg.max_retries = 1;
    cfg.timeout = std::chrono::milliseconds(500);
    EmbeddingClient client(cfg, make_http_transport(cfg.base_url, cfg.timeout), nullptr);
    CHECK(code_of([&] { client.embed_batch({"a"}); }) == ErrorCode::Network);
    CHECK(client.network_calls() == 2);
}
