#pragma once

// Registry of live sessions. Sessions share nothing; the registry lock only
// guards the id map.

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "swarm/gateway/session.hpp"

namespace swarm::gateway {

struct GatewayOptions {
    std::size_t max_sessions = 64;
    // One <id>.jsonl history file per session when set.
    std::optional<std::filesystem::path> log_dir;
    unsigned default_tick_ms = kDefaultTickMs;
    std::size_t subscriber_capacity = kDefaultSubscriberCapacity;
    bool enable_timer = true;
    // Seconds suggested to clients rejected at capacity.
    unsigned retry_after_s = 5;
};

class SessionManager {
public:
    // A null backend means the rule table.
    explicit SessionManager(GatewayOptions options = {}, std::shared_ptr<DecisionBackend> backend = nullptr);
    ~SessionManager();

    // Throws ConfigError (invalid config, nothing created) or
    // GatewayError{Capacity}.
    std::shared_ptr<Session> create(const RunConfig& config, ApplyPolicy policy,
                                    std::optional<unsigned> tick_ms = std::nullopt);

    // Throws GatewayError{NotFound}.
    std::shared_ptr<Session> get(const std::string& id) const;

    bool remove(const std::string& id);
    std::vector<std::string> ids() const;
    std::size_t size() const;

    const GatewayOptions& options() const noexcept { return options_; }

private:
    std::string new_id();

    GatewayOptions options_;
    std::shared_ptr<DecisionBackend> backend_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace swarm::gateway
