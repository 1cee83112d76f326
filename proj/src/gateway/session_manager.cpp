#include "swarm/gateway/session_manager.hpp"

#include <random>

#include <fmt/format.h>

namespace swarm::gateway {

SessionManager::SessionManager(GatewayOptions options, std::shared_ptr<DecisionBackend> backend)
    : options_(std::move(options)), backend_(std::move(backend)) {
    if (!backend_) backend_ = std::make_shared<RuleTableBackend>();
}

SessionManager::~SessionManager() {
    std::map<std::string, std::shared_ptr<Session>> sessions;
    {
        std::lock_guard lock(mutex_);
        sessions.swap(sessions_);
    }
    for (auto& [_, s] : sessions) s->close();
}

std::string SessionManager::new_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    return fmt::format("s{:016x}", rng());
}

std::shared_ptr<Session> SessionManager::create(const RunConfig& config, ApplyPolicy policy,
                                                std::optional<unsigned> tick_ms) {
    config.validate();

    std::lock_guard lock(mutex_);
    if (sessions_.size() >= options_.max_sessions) {
        throw GatewayError(GatewayError::Code::Capacity,
                           fmt::format("session limit ({}) reached", options_.max_sessions));
    }
    std::string id;
    do id = new_id();
    while (sessions_.count(id));

    SessionOptions opts;
    opts.tick_ms = tick_ms.value_or(options_.default_tick_ms);
    opts.subscriber_capacity = options_.subscriber_capacity;
    opts.enable_timer = options_.enable_timer;
    if (options_.log_dir) opts.log_path = *options_.log_dir / (id + ".jsonl");

    auto backend = backend_;
    Decider decider = [backend](const MissionContext& ctx) { return decide(ctx, *backend); };
    auto session = std::make_shared<Session>(id, config, policy, std::move(decider), std::move(opts));
    sessions_.emplace(id, session);
    return session;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw GatewayError(GatewayError::Code::NotFound, "unknown session '" + id + "'");
    return it->second;
}

bool SessionManager::remove(const std::string& id) {
    std::shared_ptr<Session> session;
    {
        std::lock_guard lock(mutex_);
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) return false;
        session = std::move(it->second);
        sessions_.erase(it);
    }
    session->close();
    return true;
}

std::vector<std::string> SessionManager::ids() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, _] : sessions_) out.push_back(id);
    return out;
}

std::size_t SessionManager::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

}  // namespace swarm::gateway
