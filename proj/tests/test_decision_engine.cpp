#include <doctest.h>

#include <functional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "swarm/decision_engine.hpp"

using namespace swarm;

namespace {

std::vector<MissionContext> all_contexts() {
    std::vector<MissionContext> out;
    std::vector<MissionKind> kinds;
    for (auto s : kAllScenarios) kinds.emplace_back(s);
    for (auto s : kAllStatuses) kinds.emplace_back(s);
    for (const auto& k : kinds)
        for (auto size : kAllSizeClasses)
            for (auto comm : kAllCommQualities)
                for (auto fail : kAllFailureProbabilities) out.push_back({k, size, comm, fail});
    return out;
}

class ScriptedBackend final : public DecisionBackend {
public:
    explicit ScriptedBackend(std::function<BackendReply(const MissionContext&)> fn) : fn_(std::move(fn)) {}
    RecommendationSource kind() const noexcept override { return RecommendationSource::ExternalModel; }
    BackendReply query(const MissionContext& ctx) override {
        ++calls;
        return fn_(ctx);
    }
    int calls = 0;

private:
    std::function<BackendReply(const MissionContext&)> fn_;
};

}  // namespace

TEST_CASE("classify_size boundaries") {
    const EnergyModelParams p;
    CHECK(classify_size(0, p) == SizeClass::Small);
    CHECK(classify_size(13, p) == SizeClass::Small);
    CHECK(classify_size(14, p) == SizeClass::Medium);
    CHECK(classify_size(41, p) == SizeClass::Medium);
    CHECK(classify_size(42, p) == SizeClass::Large);
    CHECK(classify_size(100, p) == SizeClass::Large);
}

TEST_CASE("each explicit rule returns its architecture") {
    struct Expect {
        MissionContext ctx;
        ArchitectureKind arch;
        const char* id;
    };
    using A = ArchitectureKind;
    const std::vector<Expect> rows = {
        {{Scenario::SearchAndRescue, SizeClass::Small, CommQuality::Good, FailureProbability::Low}, A::Centralized, "T1"},
        {{Scenario::SearchAndRescue, SizeClass::Large, CommQuality::Low, FailureProbability::High}, A::Holonic, "T2"},
        {{Scenario::LargeAreaMapping, SizeClass::Small, CommQuality::Good, FailureProbability::Low}, A::Hierarchical, "T3"},
        {{Scenario::LargeAreaMapping, SizeClass::Large, CommQuality::Moderate, FailureProbability::Moderate}, A::Holonic, "T4"},
        {{Scenario::EmergencySupplyDelivery, SizeClass::Medium, CommQuality::Good, FailureProbability::Low}, A::Hierarchical, "T5"},
        {{Scenario::EmergencySupplyDelivery, SizeClass::Large, CommQuality::Low, FailureProbability::High}, A::Holonic, "T6"},
        {{Scenario::PostDisasterAssessment, SizeClass::Medium, CommQuality::Good, FailureProbability::Low}, A::Hierarchical, "T7"},
        {{Scenario::PostDisasterAssessment, SizeClass::Large, CommQuality::Low, FailureProbability::High}, A::Holonic, "T8"},
        {{Status::CriticalFailure, SizeClass::Small, CommQuality::Low, FailureProbability::High}, A::Hierarchical, "S1"},
        {{Status::IdleState, SizeClass::Small, CommQuality::Good, FailureProbability::Low}, A::Centralized, "S2"},
        {{Status::SpreadOut, SizeClass::Medium, CommQuality::Moderate, FailureProbability::Moderate}, A::Hierarchical, "S3"},
        {{Status::Overload, SizeClass::Large, CommQuality::Low, FailureProbability::High}, A::Holonic, "S4"},
    };
    REQUIRE(rule_table().size() == 12);
    for (const auto& e : rows) {
        CAPTURE(e.id);
        const auto rec = recommend(e.ctx);
        CHECK(rec.architecture == e.arch);
        REQUIRE(rec.matched_rule.has_value());
        CHECK(*rec.matched_rule == e.id);
        CHECK(rec.source == RecommendationSource::RuleTable);
    }
}

TEST_CASE("context without an explicit rule goes through the fallback chain") {
    const MissionContext ctx{Scenario::LargeAreaMapping, SizeClass::Medium, CommQuality::Good, FailureProbability::Low};
    // enumerate the table: nothing matches this context
    for (const auto& row : rule_table()) {
        CHECK_FALSE((row.kind == ctx.kind && row.size_class == ctx.size_class &&
                     row.comm_quality == ctx.comm_quality && row.failure_probability == ctx.failure_probability));
    }
    const auto rec = recommend(ctx);
    CHECK(rec.architecture == ArchitectureKind::Hierarchical);
    CHECK(rec.is_fallback());
    CHECK(rec.rationale.find("fallback") != std::string::npos);

    // medium SAR swarm answers hierarchical via the fallback chain
    const auto sar = recommend({Scenario::SearchAndRescue, SizeClass::Medium, CommQuality::Good, FailureProbability::Low});
    CHECK(sar.architecture == ArchitectureKind::Hierarchical);
    CHECK(sar.is_fallback());
}

TEST_CASE("recommend is total and fallback-flagged exactly when no rule matches") {
    const auto contexts = all_contexts();
    // 8 scenario/status kinds x 3 sizes x 3 comm qualities x 3 failure levels
    CHECK(contexts.size() == 216);
    int matched = 0;
    for (const auto& ctx : contexts) {
        const auto rec = recommend(ctx);
        CHECK(rec.is_fallback() == (find_rule(ctx) == nullptr));
        CHECK_FALSE(rec.rationale.empty());
        if (!rec.is_fallback()) ++matched;
        else CHECK(rec.architecture == fallback_architecture(ctx));
    }
    CHECK(matched == 12);
}

TEST_CASE("fallback chain never leaves holonic as failure probability rises") {
    for (const auto& ctx : all_contexts()) {
        if (find_rule(ctx)) continue;
        auto raised = ctx;
        for (auto f : kAllFailureProbabilities) {
            if (f <= ctx.failure_probability) continue;
            raised.failure_probability = f;
            if (find_rule(raised)) continue;
            if (recommend(ctx).architecture == ArchitectureKind::Holonic) {
                CHECK(recommend(raised).architecture == ArchitectureKind::Holonic);
            }
        }
    }
}

TEST_CASE("fallback priority order") {
    MissionContext ctx{Status::IdleState, SizeClass::Small, CommQuality::Good, FailureProbability::High};
    CHECK(fallback_architecture(ctx) == ArchitectureKind::Holonic);
    ctx.failure_probability = FailureProbability::Moderate;
    CHECK(fallback_architecture(ctx) == ArchitectureKind::Centralized);
    ctx.comm_quality = CommQuality::Low;
    CHECK(fallback_architecture(ctx) == ArchitectureKind::Holonic);
    ctx.comm_quality = CommQuality::Moderate;
    ctx.size_class = SizeClass::Large;
    CHECK(fallback_architecture(ctx) == ArchitectureKind::Holonic);
    ctx.size_class = SizeClass::Medium;
    CHECK(fallback_architecture(ctx) == ArchitectureKind::Hierarchical);
}

TEST_CASE("model reply schema") {
    CHECK(parse_model_reply(R"({"architecture":"holonic"})") == ArchitectureKind::Holonic);
    CHECK(parse_model_reply(R"({"architecture":"  Hierarchical \n"})") == ArchitectureKind::Hierarchical);
    CHECK(parse_model_reply(R"(  {"architecture":"CENTRALIZED"}  )") == ArchitectureKind::Centralized);
    CHECK_FALSE(parse_model_reply("holonic").has_value());
    CHECK_FALSE(parse_model_reply(R"({"architecture":"mesh"})").has_value());
    CHECK_FALSE(parse_model_reply(R"({"architecture":"holonic","confidence":0.9})").has_value());
    CHECK_FALSE(parse_model_reply(R"({"arch":"holonic"})").has_value());
    CHECK_FALSE(parse_model_reply(R"({"architecture":3})").has_value());
    CHECK_FALSE(parse_model_reply(R"(["holonic"])").has_value());
    CHECK_FALSE(parse_model_reply("").has_value());
}

TEST_CASE("model request carries the context and instruction") {
    const MissionContext ctx{Status::Overload, SizeClass::Large, CommQuality::Low, FailureProbability::High};
    const auto doc = nlohmann::json::parse(build_model_request(ctx));
    CHECK(doc["context"]["kind"] == "status_based");
    CHECK(doc["context"]["status"] == "overload");
    CHECK(doc["context"]["size_class"] == "large");
    CHECK(doc["context"]["comm_quality"] == "low");
    CHECK(doc["context"]["failure_probability"] == "high");
    CHECK(doc["instruction"].get<std::string>().find("architecture") != std::string::npos);
}

TEST_CASE("decide with the rule table is recommend") {
    RuleTableBackend backend;
    for (const auto& ctx : all_contexts()) CHECK(decide(ctx, backend) == recommend(ctx));
}

TEST_CASE("decide accepts a well-formed external reply") {
    ScriptedBackend backend([](const MissionContext&) { return BackendReply{true, R"({"architecture":"holonic"})", {}}; });
    const MissionContext ctx{Scenario::SearchAndRescue, SizeClass::Large, CommQuality::Low, FailureProbability::High};
    const auto rec = decide(ctx, backend);
    CHECK(rec.architecture == ArchitectureKind::Holonic);
    CHECK(rec.source == RecommendationSource::ExternalModel);
    CHECK(rec.matched_rule == std::optional<std::string>("T2"));
    CHECK(backend.calls == 1);
}

TEST_CASE("decide falls back to the rule table when the external backend fails") {
    ScriptedBackend malformed([](const MissionContext&) { return BackendReply{true, "I think holonic is best", {}}; });
    ScriptedBackend transport([](const MissionContext&) { return BackendReply{false, {}, "timeout"}; });
    ScriptedBackend throwing([](const MissionContext&) -> BackendReply { throw std::runtime_error("boom"); });
    for (const auto& ctx : all_contexts()) {
        for (auto* b : {&malformed, &transport, &throwing}) {
            const auto rec = decide(ctx, *b);
            const auto expected = recommend(ctx);
            CHECK(rec.architecture == expected.architecture);
            CHECK(rec.matched_rule == expected.matched_rule);
            CHECK(rec.source == RecommendationSource::RuleTable);
            CHECK(rec.rationale.find("external model unavailable") != std::string::npos);
        }
    }
}

TEST_CASE("categorical parsing accepts aliases and reports valid values") {
    CHECK(parse_scenario("sar") == Scenario::SearchAndRescue);
    CHECK(parse_scenario("Large-Area-Mapping") == Scenario::LargeAreaMapping);
    CHECK(parse_status("overload") == Status::Overload);
    CHECK(parse_status("spread out") == Status::SpreadOut);
    CHECK_FALSE(parse_size_class("tiny").has_value());
    CHECK(valid_values_size_class() == "small, medium, large");
    CHECK(parse_comm_quality("moderate") == CommQuality::Moderate);
    CHECK(parse_failure_probability("HIGH") == FailureProbability::High);
}

TEST_CASE("rule table export lists every rule") {
    const auto doc = nlohmann::json::parse(export_rule_table());
    REQUIRE(doc["rules"].size() == 12);
    CHECK(doc["rules"][0]["id"] == "T1");
    CHECK(doc["rules"][0]["scenario"] == "search_and_rescue");
    CHECK(doc["rules"][0]["architecture"] == "centralized");
    CHECK(doc["rules"][11]["status"] == "overload");
    CHECK(doc["fallback_chain"].size() == 5);
}
