#include "swarm/gateway/session.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "swarm/metrics_report.hpp"

namespace swarm::gateway {

// ---------------------------------------------------------------------------
// Subscription

bool Subscription::push(std::string message) {
    {
        std::lock_guard lock(mutex_);
        if (closed_) return false;
        if (queue_.size() >= capacity_) {
            closed_ = true;
            overflowed_ = true;
        } else {
            queue_.push_back(std::move(message));
        }
    }
    cv_.notify_all();
    return !overflowed();
}

std::optional<std::string> Subscription::pop(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
    if (queue_.empty()) return std::nullopt;
    auto msg = std::move(queue_.front());
    queue_.pop_front();
    return msg;
}

void Subscription::close() {
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool Subscription::closed() const {
    std::lock_guard lock(mutex_);
    return closed_;
}

bool Subscription::overflowed() const {
    std::lock_guard lock(mutex_);
    return overflowed_;
}

// ---------------------------------------------------------------------------
// Session

namespace {

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace

Session::Session(std::string id, RunConfig config, ApplyPolicy policy, Decider decider, SessionOptions options)
    : id_(std::move(id)),
      config_(std::move(config)),
      policy_(policy),
      decider_(std::move(decider)),
      options_(std::move(options)),
      follow_adaptive_(config_.mode.is_adaptive() && policy_ == ApplyPolicy::AutoApply),
      tick_ms_(options_.tick_ms) {
    if (tick_ms_ < kMinTickMs || tick_ms_ > kMaxTickMs) throw ConfigError("tick_ms", "out of range");
    if (options_.subscriber_capacity == 0) throw ConfigError("subscriber_capacity", "must be >= 1");
    if (!decider_) throw std::invalid_argument("session requires a decider");

    auto init = initial_state(config_);
    current_ = std::move(init.snapshot);
    next_id_ = init.next_id;
    base_architecture_ = current_.active_architecture;
    size_class_ = classify_size(current_.size(), config_.params);

    if (options_.log_path) {
        std::error_code ec;
        if (options_.log_path->has_parent_path()) std::filesystem::create_directories(options_.log_path->parent_path(), ec);
        log_.open(*options_.log_path, std::ios::out | std::ios::app);
        if (!log_) throw IoError("cannot open session log " + options_.log_path->string());
    }

    json created;
    created["kind"] = "created";
    created["session_id"] = id_;
    created["policy"] = to_string(policy_);
    created["tick_ms"] = tick_ms_;
    created["config"] = run_config_to_json(config_);
    append_locked(std::move(created));

    if (options_.enable_timer) {
        ticker_ = std::jthread([this](std::stop_token stop) { ticker_loop(stop); });
    }
}

Session::~Session() { close(); }

void Session::close() {
    if (ticker_.joinable()) {
        ticker_.request_stop();
        ticker_.join();
    }
    Lock lock(mutex_);
    closed_ = true;
    running_ = false;
    std::lock_guard fan(fanout_mutex_);
    for (auto& sub : subscribers_) sub->close();
    subscribers_.clear();
}

ControlMode Session::stepping_mode() const {
    if (override_) return ControlMode::fixed(*override_);
    if (follow_adaptive_) return ControlMode::adaptive();
    return ControlMode::fixed(base_architecture_);
}

void Session::append_locked(json record) {
    json full;
    full["seq"] = seq_++;
    full["ts_ms"] = now_ms();
    full["iteration"] = current_.iteration;
    for (auto& [key, value] : record.items()) full[key] = std::move(value);
    if (log_.is_open()) {
        log_ << full.dump() << '\n';
        log_.flush();
        if (!log_) spdlog::warn("session {}: write to history log failed", id_);
    }
    history_.push_back(std::move(full));
}

std::vector<std::string> Session::advance_locked(std::size_t count, bool timer) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) {
        if (timer) append_locked(json{{"kind", "tick"}});
        auto next = step(current_, stepping_mode(), config_.params, next_id_);
        current_ = std::move(next.snapshot);
        next_id_ = next.next_id;
        snapshots_.push_back(current_);
        out.push_back(snapshot_to_json(current_).dump());

        const auto cls = classify_size(current_.size(), config_.params);
        if (cls != size_class_) {
            size_class_ = cls;
            if (mission_) {
                mission_->size_class = cls;
                recommend_locked(*mission_, "size_class_change", out, nullptr);
            }
        }
    }
    return out;
}

void Session::recommend_locked(const MissionContext& ctx, std::string_view trigger, std::vector<std::string>& out,
                               EventOutcome* outcome) {
    auto rec = decider_(ctx);
    const bool applied = policy_ == ApplyPolicy::AutoApply;

    json msg;
    msg["type"] = "recommendation";
    msg["iteration"] = current_.iteration;
    msg["trigger"] = trigger;
    msg["status"] = applied ? "applied" : "pending";
    msg["context"] = context_to_json(ctx);
    msg["recommendation"] = recommendation_to_json(rec);

    json record;
    record["kind"] = "recommendation";
    for (const auto& key : {"trigger", "status", "context", "recommendation"}) record[key] = msg[key];
    append_locked(std::move(record));

    if (applied) {
        override_ = rec.architecture;
        pending_.reset();
    } else {
        pending_ = Pending{rec, msg};
    }
    out.push_back(msg.dump());
    if (outcome) {
        outcome->recommendation = std::move(rec);
        outcome->applied = applied;
    }
}

void Session::publish(Lock& state_lock, std::vector<std::string> messages, bool relock) {
    std::unique_lock fan(fanout_mutex_);
    state_lock.unlock();
    for (auto& sub : subscribers_) {
        for (const auto& msg : messages) {
            if (!sub->push(msg)) break;
        }
    }
    std::erase_if(subscribers_, [](const auto& sub) { return sub->closed(); });
    fan.unlock();
    if (relock) state_lock.lock();
}

EventOutcome Session::handle(const OperatorEvent& event) {
    Lock lock(mutex_);
    if (closed_) throw GatewayError(GatewayError::Code::Conflict, "session is closed");

    if (std::holds_alternative<Decision>(event) && !pending_) {
        const GatewayError err(GatewayError::Code::Conflict, "no recommendation is pending");
        append_locked(json{{"kind", "rejected"},
                           {"error", {{"code", to_string(err.code())}, {"message", err.what()}}},
                           {"event", event_to_json(event)}});
        throw err;
    }
    append_locked(json{{"kind", "event"}, {"event", event_to_json(event)}});

    EventOutcome outcome;
    std::vector<std::string> out;

    if (const auto* e = std::get_if<AssignTask>(&event)) {
        const MissionContext ctx{e->scenario, classify_size(current_.size(), config_.params), e->comm_quality,
                                 e->failure_probability};
        mission_ = ctx;
        recommend_locked(ctx, "assign_task", out, &outcome);
    } else if (const auto* e = std::get_if<PostStatus>(&event)) {
        const MissionContext ctx{e->status, classify_size(current_.size(), config_.params), e->comm_quality,
                                 e->failure_probability};
        mission_ = ctx;
        recommend_locked(ctx, "post_status", out, &outcome);
    } else if (const auto* e = std::get_if<Decision>(&event)) {
        const auto recommended = pending_->recommendation.architecture;
        const auto chosen = e->override_architecture.value_or(recommended);
        override_ = chosen;
        pending_.reset();

        json msg;
        msg["type"] = "decision";
        msg["iteration"] = current_.iteration;
        msg["action"] = e->override_architecture ? "override" : "accept";
        msg["architecture"] = to_string(chosen);
        msg["recommended"] = to_string(recommended);
        msg["diverged"] = chosen != recommended;
        append_locked(json{{"kind", "decision"},
                           {"action", msg["action"]},
                           {"architecture", msg["architecture"]},
                           {"recommended", msg["recommended"]},
                           {"diverged", msg["diverged"]}});
        out.push_back(msg.dump());
    } else if (std::holds_alternative<Pause>(event)) {
        running_ = false;
        cv_.notify_all();
    } else if (const auto* e = std::get_if<Resume>(&event)) {
        if (e->tick_ms) tick_ms_ = *e->tick_ms;
        running_ = true;
        wake_ = true;
        cv_.notify_all();
    } else if (const auto* e = std::get_if<Step>(&event)) {
        out = advance_locked(e->count, false);
    }

    outcome.iteration = current_.iteration;
    publish(lock, std::move(out), false);
    return outcome;
}

void Session::record_rejected(const nlohmann::json& raw, const GatewayError& error) {
    Lock lock(mutex_);
    json err{{"code", to_string(error.code())}, {"message", error.what()}};
    if (!error.field().empty()) err["field"] = error.field();
    append_locked(json{{"kind", "rejected"}, {"error", std::move(err)}, {"event", raw}});
}

void Session::tick() {
    Lock lock(mutex_);
    if (closed_) return;
    auto out = advance_locked(1, true);
    publish(lock, std::move(out), false);
}

void Session::ticker_loop(std::stop_token stop) {
    Lock lock(mutex_);
    while (!stop.stop_requested()) {
        if (!running_) {
            cv_.wait(lock, stop, [&] { return running_; });
            continue;
        }
        wake_ = false;
        const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(tick_ms_);
        if (cv_.wait_until(lock, stop, deadline, [&] { return wake_ || !running_; })) continue;
        if (stop.stop_requested() || !running_ || closed_) continue;
        auto out = advance_locked(1, true);
        publish(lock, std::move(out), true);
    }
}

std::shared_ptr<Subscription> Session::subscribe() {
    auto sub = std::make_shared<Subscription>(options_.subscriber_capacity);
    Lock lock(mutex_);
    std::lock_guard fan(fanout_mutex_);
    if (closed_) {
        sub->close();
        return sub;
    }
    sub->push(snapshot_to_json(current_, true).dump());
    if (pending_) {
        auto msg = pending_->message;
        msg["sync"] = true;
        sub->push(msg.dump());
    }
    subscribers_.push_back(sub);
    return sub;
}

void Session::unsubscribe(const std::shared_ptr<Subscription>& sub) {
    std::lock_guard fan(fanout_mutex_);
    std::erase(subscribers_, sub);
    sub->close();
}

std::size_t Session::subscriber_count() {
    std::lock_guard fan(fanout_mutex_);
    return subscribers_.size();
}

json Session::state() const {
    Lock lock(mutex_);
    json doc;
    doc["session_id"] = id_;
    doc["policy"] = to_string(policy_);
    doc["control_mode"] = config_.mode.name();
    doc["mode"] = running_ ? "running" : "paused";
    doc["tick_ms"] = tick_ms_;
    doc["next_iteration"] = current_.iteration + 1;
    doc["size_class"] = to_string(size_class_);
    doc["override"] = override_ ? json(to_string(*override_)) : json(nullptr);
    doc["mission"] = mission_ ? context_to_json(*mission_) : json(nullptr);
    doc["pending"] = pending_ ? recommendation_to_json(pending_->recommendation) : json(nullptr);
    doc["history_length"] = history_.size();
    doc["config"] = run_config_to_json(config_);
    doc["snapshot"] = snapshot_to_json(current_);
    return doc;
}

std::vector<json> Session::history() const {
    Lock lock(mutex_);
    return history_;
}

SwarmSnapshot Session::current() const {
    Lock lock(mutex_);
    return current_;
}

std::vector<SwarmSnapshot> Session::snapshots() const {
    Lock lock(mutex_);
    return snapshots_;
}

std::string Session::csv() const {
    Lock lock(mutex_);
    return to_csv(snapshots_);
}

bool Session::running() const {
    Lock lock(mutex_);
    return running_;
}

}  // namespace swarm::gateway
