#include <doctest.h>

#include "swarm/gateway/wire.hpp"

using namespace swarm;
using namespace swarm::gateway;

namespace {

std::string field_of(const nlohmann::json& doc) {
    try {
        parse_event(doc);
    } catch (const GatewayError& e) {
        CHECK(e.code() == GatewayError::Code::Validation);
        return e.field();
    }
    return "<accepted>";
}

}  // namespace

TEST_CASE("events round-trip through their documents") {
    const std::vector<OperatorEvent> events = {
        AssignTask{Scenario::SearchAndRescue, CommQuality::Good, FailureProbability::Low},
        PostStatus{Status::Overload, CommQuality::Low, FailureProbability::High},
        Decision{},
        Decision{ArchitectureKind::Holonic},
        Pause{},
        Resume{},
        Resume{250},
        Step{3},
    };
    for (const auto& e : events) {
        const auto doc = event_to_json(e);
        CAPTURE(doc.dump());
        CHECK(event_to_json(parse_event(nlohmann::json::parse(doc.dump()))) == doc);
    }
}

TEST_CASE("event documents") {
    CHECK(event_to_json(AssignTask{Scenario::SearchAndRescue, CommQuality::Good, FailureProbability::Low}).dump() ==
          R"({"type":"assign_task","scenario":"search_and_rescue","comm_quality":"good","failure_probability":"low"})");
    CHECK(event_to_json(Decision{ArchitectureKind::Holonic}).dump() ==
          R"({"type":"decision","action":"override","architecture":"holonic"})");
    const auto step = parse_event(nlohmann::json{{"type", "step"}});
    CHECK(std::get<Step>(step).count == 1);
    const auto sar = parse_event(nlohmann::json::parse(
        R"({"type":"assign_task","scenario":"SAR","comm_quality":"Good","failure_probability":"low"})"));
    CHECK(std::get<AssignTask>(sar).scenario == Scenario::SearchAndRescue);
}

TEST_CASE("malformed events name the offending field") {
    using nlohmann::json;
    CHECK(field_of(json::array()) == "event");
    CHECK(field_of(json::object()) == "type");
    CHECK(field_of(json{{"type", "jump"}}) == "type");
    CHECK(field_of(json{{"type", "assign_task"}, {"comm_quality", "good"}, {"failure_probability", "low"}}) ==
          "scenario");
    CHECK(field_of(json{{"type", "assign_task"},
                        {"scenario", "sar"},
                        {"comm_quality", "excellent"},
                        {"failure_probability", "low"}}) == "comm_quality");
    CHECK(field_of(json{{"type", "post_status"}, {"status", "idle_state"}, {"comm_quality", "good"},
                        {"failure_probability", 3}}) == "failure_probability");
    CHECK(field_of(json{{"type", "decision"}}) == "action");
    CHECK(field_of(json{{"type", "decision"}, {"action", "maybe"}}) == "action");
    CHECK(field_of(json{{"type", "decision"}, {"action", "override"}}) == "architecture");
    CHECK(field_of(json{{"type", "decision"}, {"action", "override"}, {"architecture", "mesh"}}) == "architecture");
    CHECK(field_of(json{{"type", "step"}, {"count", 0}}) == "count");
    CHECK(field_of(json{{"type", "step"}, {"count", -2}}) == "count");
    CHECK(field_of(json{{"type", "step"}, {"count", "3"}}) == "count");
    CHECK(field_of(json{{"type", "resume"}, {"tick_ms", 0}}) == "tick_ms");
    CHECK(field_of(json{{"type", "pause"}, {"extra", 1}}) == "extra");
}

TEST_CASE("invalid enum values list the valid ones") {
    try {
        parse_event(nlohmann::json{{"type", "post_status"},
                                   {"status", "asleep"},
                                   {"comm_quality", "good"},
                                   {"failure_probability", "low"}});
        FAIL("expected validation error");
    } catch (const GatewayError& e) {
        CHECK(std::string(e.what()).find(valid_values_status()) != std::string::npos);
    }
}

TEST_CASE("snapshot document") {
    SwarmSnapshot snap;
    snap.iteration = 4;
    snap.drones = {{7, 620.0, 3}};
    snap.active_architecture = ArchitectureKind::Hierarchical;
    snap.connected = false;
    snap.per_drone_energy = 80;
    snap.total_energy = 160;
    snap.charged = 2;
    snap.depleted_this_iteration = 1;
    CHECK(snapshot_to_json(snap).dump() ==
          R"({"type":"snapshot","iteration":4,"size":1,"active_architecture":"hierarchical","connected":false,)"
          R"("per_drone_energy":80.0,"total_energy":160.0,"charged":2,"depleted_this_iteration":1,)"
          R"("drones":[{"id":7,"battery":620.0,"born_at":3}]})");
    CHECK(snapshot_to_json(snap, true)["sync"] == true);
}

TEST_CASE("recommendation round-trip") {
    const auto rec = recommend({Scenario::LargeAreaMapping, SizeClass::Medium, CommQuality::Good, FailureProbability::Low});
    const auto doc = recommendation_to_json(rec);
    CHECK(doc["matched_rule"].is_null());
    CHECK(doc["fallback"] == true);
    CHECK(recommendation_from_json(nlohmann::json::parse(doc.dump())) == rec);
}

TEST_CASE("run config documents") {
    RunConfig cfg;
    cfg.mode = ControlMode::fixed(ArchitectureKind::Holonic);
    cfg.iterations = 99;
    cfg.initial_size = 4;
    cfg.seed = 17;
    cfg.params.k_ho = 2.5;
    const auto back = run_config_from_json(nlohmann::json::parse(run_config_to_json(cfg).dump()));
    CHECK(back.mode == cfg.mode);
    CHECK(back.iterations == 99);
    CHECK(back.initial_size == 4);
    CHECK(back.seed == 17);
    CHECK(back.params == cfg.params);

    const auto defaults = run_config_from_json(nlohmann::json::object());
    CHECK(defaults.mode.is_adaptive());
    CHECK(defaults.iterations == 150);

    auto field = [](const char* text) {
        try {
            run_config_from_json(nlohmann::json::parse(text));
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("<accepted>");
    };
    CHECK(field(R"({"mode":"mesh"})") == "mode");
    CHECK(field(R"({"iterations":-1})") == "iterations");
    CHECK(field(R"({"params":{"k_o":"ten"}})") == "params.k_o");
    CHECK(field(R"({"params":{"k_x":1}})") == "params.k_x");
    CHECK(field(R"({"colour":"red"})") == "colour");
}

TEST_CASE("policy names") {
    CHECK(parse_policy("auto_apply") == ApplyPolicy::AutoApply);
    CHECK(parse_policy("Require-Confirmation") == ApplyPolicy::RequireConfirmation);
    CHECK_FALSE(parse_policy("sometimes").has_value());
    CHECK(to_string(ApplyPolicy::RequireConfirmation) == "require_confirmation");
}
