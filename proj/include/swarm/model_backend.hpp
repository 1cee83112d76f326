#pragma once

// DecisionBackend that forwards mission context to an external model service
// over HTTP. Configured from the environment:
//   DECISION_BACKEND_URL         e.g. http://localhost:8080/v1/architecture
//   DECISION_BACKEND_KEY         sent as "Authorization: Bearer <key>" when set
//   DECISION_BACKEND_TIMEOUT_MS  default 5000

#include <chrono>
#include <optional>
#include <string>

#include "swarm/decision_engine.hpp"

namespace swarm {

struct ModelEndpoint {
    std::string url;
    std::string api_key;
    std::chrono::milliseconds timeout{5000};
};

// nullopt when DECISION_BACKEND_URL is unset or empty. Throws ConfigError
// for a malformed URL or timeout.
std::optional<ModelEndpoint> endpoint_from_env();

class HttpModelBackend final : public DecisionBackend {
public:
    // Throws ConfigError if the URL is not http(s)://host[:port][/path].
    explicit HttpModelBackend(ModelEndpoint endpoint);

    RecommendationSource kind() const noexcept override { return RecommendationSource::ExternalModel; }
    BackendReply query(const MissionContext& ctx) override;

private:
    ModelEndpoint endpoint_;
    std::string origin_;  // scheme://host[:port]
    std::string path_;
};

}  // namespace swarm
