#include "swarm/decision_engine.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include <json.hpp>
#include <spdlog/spdlog.h>

namespace swarm {

namespace {

using A = ArchitectureKind;
using S = SizeClass;
using C = CommQuality;
using F = FailureProbability;

constexpr std::array<RuleRow, 12> kRules{{
    {"T1", Scenario::SearchAndRescue, S::Small, C::Good, F::Low, A::Centralized},
    {"T2", Scenario::SearchAndRescue, S::Large, C::Low, F::High, A::Holonic},
    {"T3", Scenario::LargeAreaMapping, S::Small, C::Good, F::Low, A::Hierarchical},
    {"T4", Scenario::LargeAreaMapping, S::Large, C::Moderate, F::Moderate, A::Holonic},
    {"T5", Scenario::EmergencySupplyDelivery, S::Medium, C::Good, F::Low, A::Hierarchical},
    {"T6", Scenario::EmergencySupplyDelivery, S::Large, C::Low, F::High, A::Holonic},
    {"T7", Scenario::PostDisasterAssessment, S::Medium, C::Good, F::Low, A::Hierarchical},
    {"T8", Scenario::PostDisasterAssessment, S::Large, C::Low, F::High, A::Holonic},
    {"S1", Status::CriticalFailure, S::Small, C::Low, F::High, A::Hierarchical},
    {"S2", Status::IdleState, S::Small, C::Good, F::Low, A::Centralized},
    {"S3", Status::SpreadOut, S::Medium, C::Moderate, F::Moderate, A::Hierarchical},
    {"S4", Status::Overload, S::Large, C::Low, F::High, A::Holonic},
}};

constexpr std::string_view kInstruction =
    "You select the control architecture for a drone swarm. Consider the mission scenario or "
    "reported status, the swarm size class, the communication quality and the drone failure "
    "probability. Reply with a JSON object containing exactly one field, \"architecture\", whose "
    "value is one of \"centralized\", \"hierarchical\" or \"holonic\".";

std::string lower_trim(std::string_view text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    auto last = text.find_last_not_of(" \t\r\n");
    std::string out(text.substr(first, last - first + 1));
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return c == '-' || c == ' ' ? '_' : static_cast<char>(std::tolower(c));
    });
    return out;
}

struct Alias {
    std::string_view name;
    int value;
};

template <typename E, std::size_t N>
std::optional<E> parse_with(std::string_view text, const std::array<Alias, N>& aliases) {
    const auto key = lower_trim(text);
    for (const auto& a : aliases) {
        if (a.name == key) return static_cast<E>(a.value);
    }
    return std::nullopt;
}

template <std::size_t N>
std::string join_names(const std::array<Alias, N>& aliases) {
    std::string out;
    for (const auto& a : aliases) {
        if (!out.empty()) out += ", ";
        out += a.name;
    }
    return out;
}

constexpr std::array<Alias, 8> kScenarioNames{{
    {"search_and_rescue", 0}, {"sar", 0},
    {"large_area_mapping", 1}, {"mapping", 1},
    {"emergency_supply_delivery", 2}, {"delivery", 2},
    {"post_disaster_assessment", 3}, {"assessment", 3},
}};
constexpr std::array<Alias, 4> kStatusNames{{
    {"critical_failure", 0}, {"idle_state", 1}, {"spread_out", 2}, {"overload", 3},
}};
constexpr std::array<Alias, 3> kSizeNames{{{"small", 0}, {"medium", 1}, {"large", 2}}};
constexpr std::array<Alias, 3> kCommNames{{{"good", 0}, {"moderate", 1}, {"low", 2}}};
constexpr std::array<Alias, 3> kFailureNames{{{"low", 0}, {"moderate", 1}, {"high", 2}}};

std::string_view kind_name(const MissionKind& kind) {
    return std::visit([](auto v) { return to_string(v); }, kind);
}

}  // namespace

std::string_view to_string(Scenario v) noexcept {
    switch (v) {
        case Scenario::SearchAndRescue: return "search_and_rescue";
        case Scenario::LargeAreaMapping: return "large_area_mapping";
        case Scenario::EmergencySupplyDelivery: return "emergency_supply_delivery";
        case Scenario::PostDisasterAssessment: return "post_disaster_assessment";
    }
    return "unknown";
}

std::string_view to_string(Status v) noexcept {
    switch (v) {
        case Status::CriticalFailure: return "critical_failure";
        case Status::IdleState: return "idle_state";
        case Status::SpreadOut: return "spread_out";
        case Status::Overload: return "overload";
    }
    return "unknown";
}

std::string_view to_string(SizeClass v) noexcept {
    switch (v) {
        case SizeClass::Small: return "small";
        case SizeClass::Medium: return "medium";
        case SizeClass::Large: return "large";
    }
    return "unknown";
}

std::string_view to_string(CommQuality v) noexcept {
    switch (v) {
        case CommQuality::Good: return "good";
        case CommQuality::Moderate: return "moderate";
        case CommQuality::Low: return "low";
    }
    return "unknown";
}

std::string_view to_string(FailureProbability v) noexcept {
    switch (v) {
        case FailureProbability::Low: return "low";
        case FailureProbability::Moderate: return "moderate";
        case FailureProbability::High: return "high";
    }
    return "unknown";
}

std::string_view to_string(RecommendationSource v) noexcept {
    return v == RecommendationSource::RuleTable ? "rule_table" : "external_model";
}

std::optional<Scenario> parse_scenario(std::string_view t) { return parse_with<Scenario>(t, kScenarioNames); }
std::optional<Status> parse_status(std::string_view t) { return parse_with<Status>(t, kStatusNames); }
std::optional<SizeClass> parse_size_class(std::string_view t) { return parse_with<SizeClass>(t, kSizeNames); }
std::optional<CommQuality> parse_comm_quality(std::string_view t) {
    return parse_with<CommQuality>(t, kCommNames);
}
std::optional<FailureProbability> parse_failure_probability(std::string_view t) {
    return parse_with<FailureProbability>(t, kFailureNames);
}

std::string valid_values_scenario() { return join_names(kScenarioNames); }
std::string valid_values_status() { return join_names(kStatusNames); }
std::string valid_values_size_class() { return join_names(kSizeNames); }
std::string valid_values_comm_quality() { return join_names(kCommNames); }
std::string valid_values_failure_probability() { return join_names(kFailureNames); }

std::string describe(const MissionContext& ctx) {
    std::string out = std::holds_alternative<Scenario>(ctx.kind) ? "task " : "status ";
    out += kind_name(ctx.kind);
    out += ", size ";
    out += to_string(ctx.size_class);
    out += ", comm ";
    out += to_string(ctx.comm_quality);
    out += ", failure ";
    out += to_string(ctx.failure_probability);
    return out;
}

std::span<const RuleRow> rule_table() noexcept { return kRules; }

std::string export_rule_table() {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : kRules) {
        nlohmann::ordered_json row;
        row["id"] = r.id;
        if (std::holds_alternative<Scenario>(r.kind)) {
            row["scenario"] = to_string(std::get<Scenario>(r.kind));
        } else {
            row["status"] = to_string(std::get<Status>(r.kind));
        }
        row["size_class"] = to_string(r.size_class);
        row["comm_quality"] = to_string(r.comm_quality);
        row["failure_probability"] = to_string(r.failure_probability);
        row["architecture"] = to_string(r.architecture);
        rows.push_back(std::move(row));
    }
    nlohmann::ordered_json doc;
    doc["rules"] = std::move(rows);
    doc["fallback_chain"] = {
        "failure_probability == high -> holonic",
        "comm_quality == low -> holonic",
        "size_class == large -> holonic",
        "size_class == medium -> hierarchical",
        "otherwise -> centralized",
    };
    return doc.dump(2) + "\n";
}

SizeClass classify_size(std::size_t n, const EnergyModelParams& params) noexcept {
    if (n < params.n_hier_min) return SizeClass::Small;
    if (n < params.n_holonic_min) return SizeClass::Medium;
    return SizeClass::Large;
}

const RuleRow* find_rule(const MissionContext& ctx) noexcept {
    for (const auto& r : kRules) {
        if (r.kind == ctx.kind && r.size_class == ctx.size_class && r.comm_quality == ctx.comm_quality &&
            r.failure_probability == ctx.failure_probability) {
            return &r;
        }
    }
    return nullptr;
}

ArchitectureKind fallback_architecture(const MissionContext& ctx) noexcept {
    if (ctx.failure_probability == FailureProbability::High) return ArchitectureKind::Holonic;
    if (ctx.comm_quality == CommQuality::Low) return ArchitectureKind::Holonic;
    if (ctx.size_class == SizeClass::Large) return ArchitectureKind::Holonic;
    if (ctx.size_class == SizeClass::Medium) return ArchitectureKind::Hierarchical;
    return ArchitectureKind::Centralized;
}

Recommendation recommend(const MissionContext& ctx) {
    Recommendation rec;
    rec.source = RecommendationSource::RuleTable;
    if (const auto* row = find_rule(ctx)) {
        rec.architecture = row->architecture;
        rec.matched_rule = std::string(row->id);
        rec.rationale = "rule " + std::string(row->id) + " matches (" + describe(ctx) + ")";
        return rec;
    }
    rec.architecture = fallback_architecture(ctx);
    std::string why;
    if (ctx.failure_probability == FailureProbability::High) {
        why = "high failure probability favours the fault-tolerant holonic structure";
    } else if (ctx.comm_quality == CommQuality::Low) {
        why = "low communication quality favours neighbour-only holonic exchange";
    } else if (ctx.size_class == SizeClass::Large) {
        why = "large swarms scale best under holonic control";
    } else if (ctx.size_class == SizeClass::Medium) {
        why = "medium swarms need the scalability of hierarchical control";
    } else {
        why = "small swarm with workable communication suits centralized control";
    }
    rec.rationale = "fallback (" + describe(ctx) + "): " + why;
    return rec;
}

std::optional<ArchitectureKind> parse_model_reply(std::string_view body) {
    const auto doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object() || doc.size() != 1) return std::nullopt;
    const auto it = doc.find("architecture");
    if (it == doc.end() || !it->is_string()) return std::nullopt;
    return parse_architecture(it->get<std::string>());
}

std::string build_model_request(const MissionContext& ctx) {
    nlohmann::ordered_json context;
    if (std::holds_alternative<Scenario>(ctx.kind)) {
        context["kind"] = "task_based";
        context["scenario"] = to_string(std::get<Scenario>(ctx.kind));
    } else {
        context["kind"] = "status_based";
        context["status"] = to_string(std::get<Status>(ctx.kind));
    }
    context["size_class"] = to_string(ctx.size_class);
    context["comm_quality"] = to_string(ctx.comm_quality);
    context["failure_probability"] = to_string(ctx.failure_probability);

    nlohmann::ordered_json doc;
    doc["instruction"] = kInstruction;
    doc["context"] = std::move(context);
    doc["response_schema"] = {
        {"type", "object"},
        {"required", {"architecture"}},
        {"properties", {{"architecture", {{"enum", {"centralized", "hierarchical", "holonic"}}}}}},
    };
    return doc.dump();
}

Recommendation decide(const MissionContext& ctx, DecisionBackend& backend) {
    if (backend.kind() == RecommendationSource::RuleTable) return recommend(ctx);

    std::string failure;
    BackendReply reply;
    try {
        reply = backend.query(ctx);
    } catch (const std::exception& e) {
        reply = BackendReply{false, {}, e.what()};
    }
    if (reply.ok) {
        if (auto arch = parse_model_reply(reply.body)) {
            Recommendation rec;
            rec.architecture = *arch;
            rec.source = RecommendationSource::ExternalModel;
            if (const auto* row = find_rule(ctx)) rec.matched_rule = std::string(row->id);
            rec.rationale = "external model selected " + std::string(to_string(*arch)) + " (" +
                            describe(ctx) + ")";
            return rec;
        }
        failure = "schema violation in model reply";
    } else {
        failure = reply.error.empty() ? "transport failure" : reply.error;
    }
    spdlog::warn("decision backend failed ({}); using rule table", failure);
    auto rec = recommend(ctx);
    rec.rationale += " [external model unavailable: " + failure + "]";
    return rec;
}

}  // namespace swarm
