#include "swarm/model_backend.hpp"

#include <cstdlib>
#include <regex>

#include <httplib.h>

namespace swarm {

namespace {

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
}

}  // namespace

std::optional<ModelEndpoint> endpoint_from_env() {
    auto url = env_or_empty("DECISION_BACKEND_URL");
    if (url.empty()) return std::nullopt;
    ModelEndpoint ep;
    ep.url = std::move(url);
    ep.api_key = env_or_empty("DECISION_BACKEND_KEY");
    if (auto timeout = env_or_empty("DECISION_BACKEND_TIMEOUT_MS"); !timeout.empty()) {
        char* end = nullptr;
        const long ms = std::strtol(timeout.c_str(), &end, 10);
        if (end == timeout.c_str() || *end != '\0' || ms <= 0) {
            throw ConfigError("DECISION_BACKEND_TIMEOUT_MS", "must be a positive integer");
        }
        ep.timeout = std::chrono::milliseconds(ms);
    }
    return ep;
}

HttpModelBackend::HttpModelBackend(ModelEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    static const std::regex kUrl(R"(^(https?://[^/\s]+)(/[^\s]*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(endpoint_.url, m, kUrl)) {
        throw ConfigError("DECISION_BACKEND_URL", "expected http(s)://host[:port][/path], got '" +
                                                       endpoint_.url + "'");
    }
    origin_ = m[1].str();
    path_ = m[2].matched ? m[2].str() : "/";
}

BackendReply HttpModelBackend::query(const MissionContext& ctx) {
    httplib::Client client(origin_);
    if (!client.is_valid()) return {false, {}, "cannot create client for " + origin_};

    const auto timeout = endpoint_.timeout;
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    if (!endpoint_.api_key.empty()) headers.emplace("Authorization", "Bearer " + endpoint_.api_key);

    auto res = client.Post(path_, headers, build_model_request(ctx), "application/json");
    if (!res) return {false, {}, "request to " + endpoint_.url + " failed: " + httplib::to_string(res.error())};
    if (res->status != 200) {
        return {false, {}, "model service returned HTTP " + std::to_string(res->status)};
    }
    return {true, res->body, {}};
}

}  // namespace swarm
