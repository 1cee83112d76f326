#pragma once

// One live, operator-steered simulation.
//
// All state mutations (operator events and timer ticks) run under a single
// per-session mutex, giving a total order. Messages produced by a mutation
// are handed to subscribers after that mutex is released, under a separate
// fan-out mutex that is acquired first so delivery order equals mutation
// order.

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <thread>
#include <vector>

#include "swarm/gateway/wire.hpp"

namespace swarm::gateway {

using Decider = std::function<Recommendation(const MissionContext&)>;

inline constexpr unsigned kDefaultTickMs = 500;
inline constexpr std::size_t kDefaultSubscriberCapacity = 1024;

// Bounded single-consumer queue of serialized stream documents. A push into
// a full queue closes it; the consumer then drains what is left and should
// resubscribe.
class Subscription {
public:
    explicit Subscription(std::size_t capacity) : capacity_(capacity) {}

    // False when the queue is closed (now or already).
    bool push(std::string message);

    // Waits up to timeout. nullopt on timeout or when closed and drained.
    std::optional<std::string> pop(std::chrono::milliseconds timeout);

    void close();
    bool closed() const;
    bool overflowed() const;

private:
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<std::string> queue_;
    std::size_t capacity_;
    bool closed_ = false;
    bool overflowed_ = false;
};

struct SessionOptions {
    unsigned tick_ms = kDefaultTickMs;
    std::size_t subscriber_capacity = kDefaultSubscriberCapacity;
    // When false, Running mode never steps on its own; tick() drives it.
    bool enable_timer = true;
    // Append-only JSON-lines history file.
    std::optional<std::filesystem::path> log_path;
};

struct EventOutcome {
    std::int64_t iteration = -1;  // latest snapshot after the event
    std::optional<Recommendation> recommendation;
    bool applied = false;
};

class Session {
public:
    // Throws ConfigError for an invalid config, IoError if the log cannot be opened.
    Session(std::string id, RunConfig config, ApplyPolicy policy, Decider decider, SessionOptions options = {});
    ~Session();

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const noexcept { return id_; }
    const RunConfig& config() const noexcept { return config_; }
    ApplyPolicy policy() const noexcept { return policy_; }

    // Throws GatewayError{Conflict} when the event is not valid in the
    // current state; the rejection is still recorded in history.
    EventOutcome handle(const OperatorEvent& event);

    // Records an event that failed validation before it could be parsed.
    void record_rejected(const nlohmann::json& raw, const GatewayError& error);

    // One timer-driven iteration, regardless of Paused/Running.
    void tick();

    // First message is a sync snapshot of the current state (plus the pending
    // recommendation, if any), then every later message in order.
    std::shared_ptr<Subscription> subscribe();
    void unsubscribe(const std::shared_ptr<Subscription>& sub);
    std::size_t subscriber_count();

    // Stops the timer and disconnects subscribers. Idempotent.
    void close();

    json state() const;
    std::vector<json> history() const;
    SwarmSnapshot current() const;
    // Every stepped snapshot, oldest first (the seed is not included).
    std::vector<SwarmSnapshot> snapshots() const;
    std::string csv() const;
    bool running() const;

private:
    using Lock = std::unique_lock<std::mutex>;

    struct Pending {
        Recommendation recommendation;
        json message;  // stream document, re-sent on subscribe
    };

    ControlMode stepping_mode() const;
    void append_locked(json record);
    std::vector<std::string> advance_locked(std::size_t count, bool timer);
    void recommend_locked(const MissionContext& ctx, std::string_view trigger, std::vector<std::string>& out,
                          EventOutcome* outcome);
    void publish(Lock& state_lock, std::vector<std::string> messages, bool relock);
    void ticker_loop(std::stop_token stop);

    const std::string id_;
    const RunConfig config_;
    const ApplyPolicy policy_;
    const Decider decider_;
    const SessionOptions options_;
    const bool follow_adaptive_;

    mutable std::mutex mutex_;
    std::condition_variable_any cv_;
    SwarmSnapshot current_;
    DroneId next_id_ = 0;
    std::vector<SwarmSnapshot> snapshots_;
    ArchitectureKind base_architecture_;
    std::optional<ArchitectureKind> override_;
    std::optional<Pending> pending_;
    std::optional<MissionContext> mission_;
    SizeClass size_class_;
    bool running_ = false;
    bool wake_ = false;
    unsigned tick_ms_;
    std::uint64_t seq_ = 0;
    std::vector<json> history_;
    std::ofstream log_;
    bool closed_ = false;

    std::mutex fanout_mutex_;
    std::vector<std::shared_ptr<Subscription>> subscribers_;

    std::jthread ticker_;  // last: joined before the members above are destroyed
};

}  // namespace swarm::gateway
