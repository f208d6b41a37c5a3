#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace rdskit {

struct HttpRequest {
    std::string path;
    std::string body;
    std::vector<std::pair<std::string, std::string>> headers;
};

struct HttpResponse {
    int status = 0;  // 0 = no response (connection error, timeout)
    std::string body;
    std::string error;
};

/// POST-only transport; implementations must be safe to call concurrently.
class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const HttpRequest& request) = 0;
};

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path prefix without trailing '/'
};

ParsedUrl parse_base_url(const std::string& base_url);

/// Path of an OpenAI-compatible route under the URL prefix, e.g.
/// "http://h:8000" + "embeddings" -> "/v1/embeddings", and
/// "http://h/api/v1" + "embeddings" -> "/api/v1/embeddings".
std::string route_path(const std::string& base_url, const std::string& route);

/// cpp-httplib backed transport for http:// and https:// origins.
std::shared_ptr<Transport> make_http_transport(const std::string& base_url,
                                               std::chrono::milliseconds timeout);

} // namespace rdskit
