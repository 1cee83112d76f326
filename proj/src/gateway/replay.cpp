#include "swarm/gateway/replay.hpp"

#include <deque>
#include <fstream>

#include "swarm/gateway/session.hpp"
#include "swarm/metrics_report.hpp"

namespace swarm::gateway {

namespace {

[[noreturn]] void bad_log(const std::string& message) {
    throw GatewayError(GatewayError::Code::Validation, "history: " + message, "history");
}

}  // namespace

std::vector<json> read_history(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<json> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto doc = json::parse(line, nullptr, false);
        if (doc.is_discarded()) bad_log("line " + std::to_string(number) + " is not valid JSON");
        out.push_back(std::move(doc));
    }
    return out;
}

ReplayResult replay(std::span<const json> records) {
    if (records.empty() || records.front().value("kind", "") != "created") bad_log("first record must be 'created'");
    const auto& created = records.front();

    RunConfig config;
    try {
        config = run_config_from_json(nlohmann::json::parse(created.at("config").dump()));
    } catch (const std::exception& e) {
        bad_log(std::string("bad config: ") + e.what());
    }
    const auto policy = parse_policy(created.value("policy", ""));
    if (!policy) bad_log("unknown policy");

    auto recorded = std::make_shared<std::deque<Recommendation>>();
    for (const auto& r : records) {
        if (r.value("kind", "") != "recommendation") continue;
        recorded->push_back(recommendation_from_json(nlohmann::json::parse(r.at("recommendation").dump())));
    }
    Decider decider = [recorded](const MissionContext&) {
        if (recorded->empty()) bad_log("replay requested more recommendations than were recorded");
        auto rec = std::move(recorded->front());
        recorded->pop_front();
        return rec;
    };

    SessionOptions opts;
    opts.enable_timer = false;
    opts.tick_ms = created.value("tick_ms", kDefaultTickMs);
    Session session("replay", config, *policy, std::move(decider), opts);

    ReplayResult result;
    for (const auto& r : records.subspan(1)) {
        const auto kind = r.value("kind", "");
        if (kind == "event") {
            const auto event = parse_event(nlohmann::json::parse(r.at("event").dump()));
            try {
                session.handle(event);
            } catch (const GatewayError& e) {
                bad_log(std::string("recorded event was rejected on replay: ") + e.what());
            }
            ++result.events;
        } else if (kind == "tick") {
            session.tick();
            ++result.ticks;
        }
    }
    if (!recorded->empty()) bad_log("replay left recorded recommendations unused");
    result.snapshots = session.snapshots();
    result.final_state = session.current();
    return result;
}

}  // namespace swarm::gateway
