#pragma once

// Architecture recommendation from mission context.
//
// Twelve explicit rules (eight task-based, four status-based) are matched
// exactly. Any other context goes through a fixed priority chain:
//   high failure probability -> holonic
//   low communication quality -> holonic
//   large swarm              -> holonic
//   medium swarm             -> hierarchical
//   otherwise                -> centralized

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "swarm/core_model.hpp"

namespace swarm {

enum class Scenario { SearchAndRescue, LargeAreaMapping, EmergencySupplyDelivery, PostDisasterAssessment };
enum class Status { CriticalFailure, IdleState, SpreadOut, Overload };
enum class SizeClass { Small, Medium, Large };
enum class CommQuality { Good, Moderate, Low };
enum class FailureProbability { Low, Moderate, High };

inline constexpr Scenario kAllScenarios[] = {Scenario::SearchAndRescue, Scenario::LargeAreaMapping,
                                             Scenario::EmergencySupplyDelivery,
                                             Scenario::PostDisasterAssessment};
inline constexpr Status kAllStatuses[] = {Status::CriticalFailure, Status::IdleState, Status::SpreadOut,
                                          Status::Overload};
inline constexpr SizeClass kAllSizeClasses[] = {SizeClass::Small, SizeClass::Medium, SizeClass::Large};
inline constexpr CommQuality kAllCommQualities[] = {CommQuality::Good, CommQuality::Moderate, CommQuality::Low};
inline constexpr FailureProbability kAllFailureProbabilities[] = {
    FailureProbability::Low, FailureProbability::Moderate, FailureProbability::High};

// Wire names are lower_snake_case, e.g. "search_and_rescue", "critical_failure".
std::string_view to_string(Scenario v) noexcept;
std::string_view to_string(Status v) noexcept;
std::string_view to_string(SizeClass v) noexcept;
std::string_view to_string(CommQuality v) noexcept;
std::string_view to_string(FailureProbability v) noexcept;

// Accept wire names plus short aliases ("sar", "mapping", "delivery", "assessment").
std::optional<Scenario> parse_scenario(std::string_view text);
std::optional<Status> parse_status(std::string_view text);
std::optional<SizeClass> parse_size_class(std::string_view text);
std::optional<CommQuality> parse_comm_quality(std::string_view text);
std::optional<FailureProbability> parse_failure_probability(std::string_view text);

// Comma-separated list of accepted spellings, for diagnostics.
std::string valid_values_scenario();
std::string valid_values_status();
std::string valid_values_size_class();
std::string valid_values_comm_quality();
std::string valid_values_failure_probability();

using MissionKind = std::variant<Scenario, Status>;

struct MissionContext {
    MissionKind kind = Scenario::SearchAndRescue;
    SizeClass size_class = SizeClass::Small;
    CommQuality comm_quality = CommQuality::Good;
    FailureProbability failure_probability = FailureProbability::Low;

    bool operator==(const MissionContext&) const = default;
};

std::string describe(const MissionContext& ctx);

enum class RecommendationSource { RuleTable, ExternalModel };
std::string_view to_string(RecommendationSource v) noexcept;

struct RuleRow {
    std::string_view id;  // "T1".."T8" task rules, "S1".."S4" status rules
    MissionKind kind;
    SizeClass size_class;
    CommQuality comm_quality;
    FailureProbability failure_probability;
    ArchitectureKind architecture;
};

struct Recommendation {
    ArchitectureKind architecture = ArchitectureKind::Centralized;
    std::optional<std::string> matched_rule;  // empty => fallback chain
    std::string rationale;
    RecommendationSource source = RecommendationSource::RuleTable;

    bool is_fallback() const noexcept { return !matched_rule.has_value(); }
    bool operator==(const Recommendation&) const = default;
};

std::span<const RuleRow> rule_table() noexcept;

// Human-auditable export of the explicit rules (JSON, stable field order).
std::string export_rule_table();

SizeClass classify_size(std::size_t n, const EnergyModelParams& params) noexcept;

const RuleRow* find_rule(const MissionContext& ctx) noexcept;

// Priority chain applied when no explicit rule matches.
ArchitectureKind fallback_architecture(const MissionContext& ctx) noexcept;

Recommendation recommend(const MissionContext& ctx);

// ---------------------------------------------------------------------------
// Backend port

struct BackendReply {
    bool ok = false;
    std::string body;   // raw response document when ok
    std::string error;  // transport / timeout description when !ok
};

class DecisionBackend {
public:
    virtual ~DecisionBackend() = default;
    virtual RecommendationSource kind() const noexcept = 0;
    // Only called for ExternalModel backends.
    virtual BackendReply query(const MissionContext& ctx) = 0;
};

class RuleTableBackend final : public DecisionBackend {
public:
    RecommendationSource kind() const noexcept override { return RecommendationSource::RuleTable; }
    BackendReply query(const MissionContext&) override { return {}; }
};

// Parses {"architecture": "<name>"} with exactly one field. Anything else is
// a schema violation and yields nullopt.
std::optional<ArchitectureKind> parse_model_reply(std::string_view body);

// Request document sent to an external model.
std::string build_model_request(const MissionContext& ctx);

// Never fails: external replies that are missing, late or malformed fall back
// to recommend(ctx) with source RuleTable.
Recommendation decide(const MissionContext& ctx, DecisionBackend& backend);

}  // namespace swarm
