#include <httplib.h>

#include "clients/transport.hpp"
#include "core/error.hpp"

namespace rdskit {

ParsedUrl parse_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::Config, "endpoint URL '" + base_url + "' has no scheme");
    }
    const auto scheme = base_url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw Error(ErrorCode::Config, "unsupported URL scheme '" + scheme + "'");
    }
    const auto path_start = base_url.find('/', scheme_end + 3);
    ParsedUrl out;
    out.origin = base_url.substr(0, path_start);
    if (path_start != std::string::npos) out.prefix = base_url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    if (out.origin.size() <= scheme_end + 3) throw Error(ErrorCode::Config, "endpoint URL '" + base_url + "' has no host");
    return out;
}

std::string route_path(const std::string& base_url, const std::string& route) {
    const auto url = parse_base_url(base_url);
    std::string path = url.prefix;
    if (!(path.size() >= 3 && path.compare(path.size() - 3, 3, "/v1") == 0)) path += "/v1";
    return path + "/" + route;
}

namespace {

class HttplibTransport final : public Transport {
public:
    HttplibTransport(std::string origin, std::chrono::milliseconds timeout)
        : origin_(std::move(origin)), timeout_(timeout) {}

    HttpResponse post(const HttpRequest& request) override {
        // One client per call: httplib::Client is not meant to be shared
        // between threads.
        httplib::Client client(origin_);
        client.set_connection_timeout(timeout_);
        client.set_read_timeout(timeout_);
        client.set_write_timeout(timeout_);
        httplib::Headers headers;
        std::string content_type = "application/json";
        for (const auto& [k, v] : request.headers) {
            if (k == "Content-Type") {
                content_type = v;
            } else {
                headers.emplace(k, v);
            }
        }
        auto res = client.Post(request.path, headers, request.body, content_type);
        HttpResponse out;
        if (!res) {
            out.error = httplib::to_string(res.error());
            return out;
        }
        out.status = res->status;
        out.body = res->body;
        return out;
    }

private:
    std::string origin_;
    std::chrono::milliseconds timeout_;
};

} // namespace

std::shared_ptr<Transport> make_http_transport(const std::string& base_url,
                                               std::chrono::milliseconds timeout) {
    return std::make_shared<HttplibTransport>(parse_base_url(base_url).origin, timeout);
}

} // namespace rdskit
