#pragma once

// JSON documents exchanged by the gateway. Field names are lower_snake_case
// and object keys keep insertion order so responses can be gold-filed.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "swarm/decision_engine.hpp"
#include "swarm/sim_engine.hpp"

namespace swarm::gateway {

using json = nlohmann::ordered_json;

class GatewayError : public std::runtime_error {
public:
    enum class Code { NotFound, Conflict, Validation, Capacity };

    GatewayError(Code code, std::string message, std::string field = {})
        : std::runtime_error(std::move(message)), code_(code), field_(std::move(field)) {}

    Code code() const noexcept { return code_; }
    // Offending field for validation errors, empty otherwise.
    const std::string& field() const noexcept { return field_; }

private:
    Code code_;
    std::string field_;
};

std::string_view to_string(GatewayError::Code code) noexcept;

enum class ApplyPolicy { AutoApply, RequireConfirmation };
std::string_view to_string(ApplyPolicy p) noexcept;
std::optional<ApplyPolicy> parse_policy(std::string_view text);

struct AssignTask {
    Scenario scenario;
    CommQuality comm_quality;
    FailureProbability failure_probability;
};
struct PostStatus {
    Status status;
    CommQuality comm_quality;
    FailureProbability failure_probability;
};
struct Decision {
    std::optional<ArchitectureKind> override_architecture;  // nullopt: accept
};
struct Pause {};
struct Resume {
    std::optional<unsigned> tick_ms;
};
struct Step {
    std::size_t count = 1;
};

using OperatorEvent = std::variant<AssignTask, PostStatus, Decision, Pause, Resume, Step>;

inline constexpr std::size_t kMaxStepCount = 100000;
inline constexpr unsigned kMinTickMs = 1;
inline constexpr unsigned kMaxTickMs = 3600000;

// Throws GatewayError{Validation} naming the offending field.
OperatorEvent parse_event(const nlohmann::json& doc);
json event_to_json(const OperatorEvent& event);
std::string_view event_type(const OperatorEvent& event) noexcept;

json snapshot_to_json(const SwarmSnapshot& snap, bool sync = false);
json recommendation_to_json(const Recommendation& rec);
Recommendation recommendation_from_json(const nlohmann::json& doc);
json context_to_json(const MissionContext& ctx);

json params_to_json(const EnergyModelParams& p);
json run_config_to_json(const RunConfig& cfg);

// Missing fields keep their defaults. Throws ConfigError naming the field
// (dotted for nested params, e.g. "params.k_o").
RunConfig run_config_from_json(const nlohmann::json& doc);
EnergyModelParams params_from_json(const nlohmann::json& doc, const EnergyModelParams& base = {});

}  // namespace swarm::gateway
