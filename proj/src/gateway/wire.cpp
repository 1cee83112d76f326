#include "swarm/gateway/wire.hpp"

#include <algorithm>
#include <cctype>

namespace swarm::gateway {

namespace {

using Code = GatewayError::Code;

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
    throw GatewayError(Code::Validation, field + ": " + message, field);
}

const nlohmann::json& require(const nlohmann::json& doc, const std::string& field) {
    const auto it = doc.find(field);
    if (it == doc.end() || it->is_null()) invalid(field, "is required");
    return *it;
}

std::string require_string(const nlohmann::json& doc, const std::string& field) {
    const auto& v = require(doc, field);
    if (!v.is_string()) invalid(field, "must be a string");
    return v.get<std::string>();
}

template <typename E, typename Parse>
E require_enum(const nlohmann::json& doc, const std::string& field, Parse parse, const std::string& valid) {
    const auto text = require_string(doc, field);
    const auto value = parse(text);
    if (!value) invalid(field, "unknown value '" + text + "' (valid: " + valid + ")");
    return *value;
}

std::uint64_t require_unsigned(const nlohmann::json& doc, const std::string& field) {
    const auto& v = require(doc, field);
    if (!v.is_number_unsigned()) invalid(field, "must be a non-negative integer");
    return v.get<std::uint64_t>();
}

void reject_unknown(const nlohmann::json& doc, std::initializer_list<std::string_view> known) {
    for (const auto& [key, _] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) invalid(key, "unknown field");
    }
}

std::string architecture_names() { return "centralized, hierarchical, holonic"; }

// ConfigError flavoured accessors for run configurations.
double config_double(const nlohmann::json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError(field, "must be a number");
    return v.get<double>();
}

std::uint64_t config_unsigned(const nlohmann::json& v, const std::string& field) {
    if (!v.is_number_unsigned()) throw ConfigError(field, "must be a non-negative integer");
    return v.get<std::uint64_t>();
}

}  // namespace

std::string_view to_string(GatewayError::Code code) noexcept {
    switch (code) {
        case Code::NotFound: return "not_found";
        case Code::Conflict: return "conflict";
        case Code::Validation: return "validation";
        case Code::Capacity: return "capacity";
    }
    return "unknown";
}

std::string_view to_string(ApplyPolicy p) noexcept {
    return p == ApplyPolicy::AutoApply ? "auto_apply" : "require_confirmation";
}

std::optional<ApplyPolicy> parse_policy(std::string_view text) {
    std::string key(text);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
        return c == '-' ? '_' : static_cast<char>(std::tolower(c));
    });
    if (key == "auto_apply" || key == "autoapply" || key == "auto") return ApplyPolicy::AutoApply;
    if (key == "require_confirmation" || key == "requireconfirmation" || key == "confirm")
        return ApplyPolicy::RequireConfirmation;
    return std::nullopt;
}

OperatorEvent parse_event(const nlohmann::json& doc) {
    if (!doc.is_object()) invalid("event", "must be an object");
    const auto type = require_string(doc, "type");

    if (type == "assign_task") {
        reject_unknown(doc, {"type", "scenario", "comm_quality", "failure_probability"});
        return AssignTask{
            require_enum<Scenario>(doc, "scenario", parse_scenario, valid_values_scenario()),
            require_enum<CommQuality>(doc, "comm_quality", parse_comm_quality, valid_values_comm_quality()),
            require_enum<FailureProbability>(doc, "failure_probability", parse_failure_probability,
                                             valid_values_failure_probability())};
    }
    if (type == "post_status") {
        reject_unknown(doc, {"type", "status", "comm_quality", "failure_probability"});
        return PostStatus{
            require_enum<Status>(doc, "status", parse_status, valid_values_status()),
            require_enum<CommQuality>(doc, "comm_quality", parse_comm_quality, valid_values_comm_quality()),
            require_enum<FailureProbability>(doc, "failure_probability", parse_failure_probability,
                                             valid_values_failure_probability())};
    }
    if (type == "decision") {
        reject_unknown(doc, {"type", "action", "architecture"});
        const auto action = require_string(doc, "action");
        if (action == "accept") {
            if (doc.contains("architecture")) invalid("architecture", "not allowed with action 'accept'");
            return Decision{};
        }
        if (action == "override") {
            return Decision{require_enum<ArchitectureKind>(doc, "architecture", parse_architecture,
                                                           architecture_names())};
        }
        invalid("action", "unknown value '" + action + "' (valid: accept, override)");
    }
    if (type == "pause") {
        reject_unknown(doc, {"type"});
        return Pause{};
    }
    if (type == "resume") {
        reject_unknown(doc, {"type", "tick_ms"});
        Resume r;
        if (doc.contains("tick_ms") && !doc["tick_ms"].is_null()) {
            const auto ms = require_unsigned(doc, "tick_ms");
            if (ms < kMinTickMs || ms > kMaxTickMs)
                invalid("tick_ms", "must be between " + std::to_string(kMinTickMs) + " and " +
                                       std::to_string(kMaxTickMs));
            r.tick_ms = static_cast<unsigned>(ms);
        }
        return r;
    }
    if (type == "step") {
        reject_unknown(doc, {"type", "count"});
        Step s;
        if (doc.contains("count")) {
            const auto n = require_unsigned(doc, "count");
            if (n < 1 || n > kMaxStepCount)
                invalid("count", "must be between 1 and " + std::to_string(kMaxStepCount));
            s.count = static_cast<std::size_t>(n);
        }
        return s;
    }
    invalid("type", "unknown event type '" + type +
                        "' (valid: assign_task, post_status, decision, pause, resume, step)");
}

std::string_view event_type(const OperatorEvent& event) noexcept {
    struct V {
        std::string_view operator()(const AssignTask&) const { return "assign_task"; }
        std::string_view operator()(const PostStatus&) const { return "post_status"; }
        std::string_view operator()(const Decision&) const { return "decision"; }
        std::string_view operator()(const Pause&) const { return "pause"; }
        std::string_view operator()(const Resume&) const { return "resume"; }
        std::string_view operator()(const Step&) const { return "step"; }
    };
    return std::visit(V{}, event);
}

json event_to_json(const OperatorEvent& event) {
    json doc;
    doc["type"] = event_type(event);
    if (const auto* e = std::get_if<AssignTask>(&event)) {
        doc["scenario"] = to_string(e->scenario);
        doc["comm_quality"] = to_string(e->comm_quality);
        doc["failure_probability"] = to_string(e->failure_probability);
    } else if (const auto* e = std::get_if<PostStatus>(&event)) {
        doc["status"] = to_string(e->status);
        doc["comm_quality"] = to_string(e->comm_quality);
        doc["failure_probability"] = to_string(e->failure_probability);
    } else if (const auto* e = std::get_if<Decision>(&event)) {
        if (e->override_architecture) {
            doc["action"] = "override";
            doc["architecture"] = to_string(*e->override_architecture);
        } else {
            doc["action"] = "accept";
        }
    } else if (const auto* e = std::get_if<Resume>(&event)) {
        if (e->tick_ms) doc["tick_ms"] = *e->tick_ms;
    } else if (const auto* e = std::get_if<Step>(&event)) {
        doc["count"] = e->count;
    }
    return doc;
}

json snapshot_to_json(const SwarmSnapshot& snap, bool sync) {
    json doc;
    doc["type"] = "snapshot";
    if (sync) doc["sync"] = true;
    doc["iteration"] = snap.iteration;
    doc["size"] = snap.size();
    doc["active_architecture"] = to_string(snap.active_architecture);
    doc["connected"] = snap.connected;
    doc["per_drone_energy"] = snap.per_drone_energy;
    doc["total_energy"] = snap.total_energy;
    doc["charged"] = snap.charged;
    doc["depleted_this_iteration"] = snap.depleted_this_iteration;
    auto& drones = doc["drones"] = json::array();
    for (const auto& d : snap.drones) {
        drones.push_back(json{{"id", d.id}, {"battery", d.battery}, {"born_at", d.born_at}});
    }
    return doc;
}

json recommendation_to_json(const Recommendation& rec) {
    json doc;
    doc["architecture"] = to_string(rec.architecture);
    doc["matched_rule"] = rec.matched_rule ? json(*rec.matched_rule) : json(nullptr);
    doc["fallback"] = rec.is_fallback();
    doc["rationale"] = rec.rationale;
    doc["source"] = to_string(rec.source);
    return doc;
}

Recommendation recommendation_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) invalid("recommendation", "must be an object");
    Recommendation rec;
    rec.architecture = require_enum<ArchitectureKind>(doc, "architecture", parse_architecture, architecture_names());
    const auto rule = doc.find("matched_rule");
    if (rule != doc.end() && !rule->is_null()) {
        if (!rule->is_string()) invalid("matched_rule", "must be a string or null");
        rec.matched_rule = rule->get<std::string>();
    }
    rec.rationale = require_string(doc, "rationale");
    const auto source = require_string(doc, "source");
    if (source == "rule_table") rec.source = RecommendationSource::RuleTable;
    else if (source == "external_model") rec.source = RecommendationSource::ExternalModel;
    else invalid("source", "unknown value '" + source + "' (valid: rule_table, external_model)");
    return rec;
}

json context_to_json(const MissionContext& ctx) {
    json doc;
    if (const auto* s = std::get_if<Scenario>(&ctx.kind)) {
        doc["kind"] = "task_based";
        doc["scenario"] = to_string(*s);
    } else {
        doc["kind"] = "status_based";
        doc["status"] = to_string(std::get<Status>(ctx.kind));
    }
    doc["size_class"] = to_string(ctx.size_class);
    doc["comm_quality"] = to_string(ctx.comm_quality);
    doc["failure_probability"] = to_string(ctx.failure_probability);
    return doc;
}

json params_to_json(const EnergyModelParams& p) {
    return json{{"k_o", p.k_o},
                {"k_ce", p.k_ce},
                {"k_hi", p.k_hi},
                {"k_ho", p.k_ho},
                {"capacity_b", p.capacity_b},
                {"n_hier_min", p.n_hier_min},
                {"n_holonic_min", p.n_holonic_min},
                {"drones_added_per_iteration", p.drones_added_per_iteration}};
}

json run_config_to_json(const RunConfig& cfg) {
    return json{{"mode", cfg.mode.name()},
                {"iterations", cfg.iterations},
                {"initial_size", cfg.initial_size},
                {"seed", cfg.seed},
                {"params", params_to_json(cfg.params)}};
}

EnergyModelParams params_from_json(const nlohmann::json& doc, const EnergyModelParams& base) {
    if (!doc.is_object()) throw ConfigError("params", "must be an object");
    EnergyModelParams p = base;
    for (const auto& [key, value] : doc.items()) {
        const std::string field = "params." + key;
        if (key == "k_o") p.k_o = config_double(value, field);
        else if (key == "k_ce") p.k_ce = config_double(value, field);
        else if (key == "k_hi") p.k_hi = config_double(value, field);
        else if (key == "k_ho") p.k_ho = config_double(value, field);
        else if (key == "capacity_b") p.capacity_b = config_double(value, field);
        else if (key == "n_hier_min") p.n_hier_min = config_unsigned(value, field);
        else if (key == "n_holonic_min") p.n_holonic_min = config_unsigned(value, field);
        else if (key == "drones_added_per_iteration") p.drones_added_per_iteration = config_unsigned(value, field);
        else throw ConfigError(field, "unknown field");
    }
    return p;
}

RunConfig run_config_from_json(const nlohmann::json& doc) {
    if (doc.is_null()) return {};
    if (!doc.is_object()) throw ConfigError("config", "must be an object");
    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "mode") {
            if (!value.is_string()) throw ConfigError("mode", "must be a string");
            const auto mode = parse_control_mode(value.get<std::string>());
            if (!mode)
                throw ConfigError("mode", "unknown value '" + value.get<std::string>() +
                                              "' (valid: centralized, hierarchical, holonic, adaptive)");
            cfg.mode = *mode;
        } else if (key == "iterations") {
            cfg.iterations = config_unsigned(value, "iterations");
        } else if (key == "initial_size") {
            cfg.initial_size = config_unsigned(value, "initial_size");
        } else if (key == "seed") {
            cfg.seed = config_unsigned(value, "seed");
        } else if (key == "params") {
            cfg.params = params_from_json(value);
        } else {
            throw ConfigError(key, "unknown field");
        }
    }
    return cfg;
}

}  // namespace swarm::gateway
